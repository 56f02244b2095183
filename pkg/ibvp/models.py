# -*- coding: utf-8 -*-
# Copyright 2012 Mandla Web Studio
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


__author__ = 'Jose Maria Zambrana Arze'
__email__ = 'contact@josezambrana.com'
__version__ = '0.1'
__copyright__ = 'Copyright 2012, Mandla Web Studio'


import copy
from dataclasses import dataclass, field, replace
from typing import Optional, Union


@dataclass(frozen=True)
class KernelConfig:
    """
    Sección ``kernel`` de la configuración.
    """

    #: triweight o lookahead
    name: str

    #: radio (o largo) del soporte
    h: float

    #: midpoint o cell_average
    discretization: str = 'midpoint'

    #: desfase del núcleo lookahead
    lag: Optional[float] = None

    def as_params(self):
        params = {'name': self.name, 'h': self.h}
        if self.lag is not None:
            params['lag'] = self.lag
        return params

    def to_dict(self):
        result = dict(self.as_params(), discretization=self.discretization)
        return result


@dataclass(frozen=True)
class FluxConfig:
    """
    Sección ``flux``: nombre del modelo, parámetros y región de validez.
    """

    name: str
    params: dict = field(default_factory=dict)
    box: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            'name': self.name,
            'params': copy.deepcopy(self.params),
            'box': dict((k, list(v)) for k, v in self.box.items()),
        }


@dataclass(frozen=True)
class RunConfig:
    """
    Configuración completa de una ejecución.
    """

    a: float
    b: float
    N: int
    T: float
    kernel: KernelConfig
    flux: FluxConfig

    #: especificaciones de los datos: initial, left, right
    data: dict

    alpha: Union[str, float] = 'auto'
    cfl_safety: float = 1.0

    #: λ fijo; None elige Δt por la condición CFL
    lam: Optional[float] = None

    #: monitor o strict
    mode: str = 'monitor'
    stride: int = 1
    k_grid: int = 32

    #: pasos entre verificaciones de entropía; None aplica la regla por N
    entropy_every: Optional[int] = None
    out: str = '.'

    #: directorio de referencia para rutas relativas de datos csv
    base_dir: str = field(default='.', compare=False)

    def to_dict(self):
        return {
            'domain': {'a': self.a, 'b': self.b},
            'N': self.N,
            'T': self.T,
            'alpha': self.alpha,
            'cfl_safety': self.cfl_safety,
            'lambda': self.lam,
            'kernel': self.kernel.to_dict(),
            'flux': self.flux.to_dict(),
            'data': copy.deepcopy(self.data),
            'mode': self.mode,
            'stride': self.stride,
            'k_grid': self.k_grid,
            'entropy_every': self.entropy_every,
            'out': self.out,
        }

    def update(self, **kwargs):
        return replace(self, **kwargs)
