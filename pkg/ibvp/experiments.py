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


import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ibvp.bounds import data_distances, stability_constants
from ibvp.errors import ConfigSemantic
from ibvp.grid import ProblemData, Shifted
from ibvp.managers import JobManager
from ibvp.solver import prepare, solve


#: stride que guarda solo el estado final
FINAL_ONLY = 1 << 30

TARGETS = ('initial', 'left', 'right', 'all')


@dataclass(frozen=True)
class ConvergenceResult:
    """
    Diferencias L1 en el tiempo final entre niveles consecutivos y órdenes
    observados log₂(e_k/e_{k+1}); un orden indefinido vale None.
    """

    levels: List[int]
    differences: List[float]
    orders: List[Optional[float]]
    lam: float
    T: float

    def as_dict(self):
        return {
            'levels': list(self.levels),
            'differences': list(self.differences),
            'orders': list(self.orders),
            'lambda': self.lam,
            'T': self.T,
        }


def check_levels(levels):
    levels = [int(level) for level in levels]
    if len(levels) < 3:
        raise ConfigSemantic([('levels', u'Se necesitan al menos 3 niveles: %s' % levels)])
    for coarse, fine in zip(levels, levels[1:]):
        if fine != 2 * coarse:
            raise ConfigSemantic([('levels', u'Los niveles deben duplicarse: %s' % levels)])
    return levels


def restrict(fine, factor):
    """
    Promedia grupos de *factor* celdas finas sobre cada celda gruesa.
    """

    return np.asarray(fine).reshape(-1, factor).mean(axis=1)


def observed_order(coarse, fine):
    if not (coarse > 0 and fine > 0 and math.isfinite(coarse) and math.isfinite(fine)):
        return None
    return math.log2(coarse / fine)


def convergence_study(config, levels, manager=None):
    """
    Resuelve el problema en cada nivel con el mismo λ y compara las
    soluciones finales de niveles consecutivos.

    λ se toma de la malla CFL del nivel más grueso, de modo que T sea un
    múltiplo exacto de Δt en todos los niveles.
    """

    levels = check_levels(levels)
    manager = manager or JobManager()

    coarse = prepare(config.update(N=levels[0]))
    lam = coarse.mesh.lam
    logging.info(u'Convergencia: niveles %s, lambda = %.17g' % (levels, lam))

    configs = dict((i, config.update(N=level, lam=lam, stride=FINAL_ONLY))
                   for i, level in enumerate(levels))
    jobs = dict((i, (lambda c: lambda: solve(c, entropy_every=0))(configs[i])) for i in configs)
    trajectories = manager.results_dict(jobs)

    differences = []
    for i in range(len(levels) - 1):
        coarse_cells = trajectories[i].final.cells
        fine_cells = restrict(trajectories[i + 1].final.cells, 2)
        dx = trajectories[i].mesh.dx
        differences.append(float(dx * np.sum(np.abs(coarse_cells - fine_cells))))

    orders = [observed_order(e, f) for e, f in zip(differences, differences[1:])]

    return ConvergenceResult(levels, differences, orders, float(lam), trajectories[0].mesh.T)


@dataclass(frozen=True)
class Perturbation:
    """
    Desplazamiento constante *eps* del dato indicado por *target*
    (``initial``, ``left``, ``right`` o ``all``).
    """

    eps: float
    target: str = 'initial'

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ConfigSemantic([('perturb.target', u'Debe ser uno de %s' % (TARGETS,))])
        if not math.isfinite(self.eps):
            raise ConfigSemantic([('perturb.eps', u'Debe ser finito: %s' % self.eps)])

    @classmethod
    def parse(cls, text):
        """
        Lee ``eps=1e-3,target=initial``.
        """

        values = {}
        for item in text.split(','):
            key, sep, value = item.partition('=')
            if not sep or key.strip() not in ('eps', 'target'):
                raise ConfigSemantic([('perturb', u'Elemento inválido: %r' % item)])
            values[key.strip()] = value.strip()

        if 'eps' not in values:
            raise ConfigSemantic([('perturb.eps', u'El campo es obligatorio')])
        try:
            eps = float(values['eps'])
        except ValueError:
            raise ConfigSemantic([('perturb.eps', u'Debe ser un número: %r' % values['eps'])])

        return cls(eps, values.get('target', 'initial'))

    def _shift(self, datum, name):
        if self.target in (name, 'all') and self.eps != 0.0:
            return Shifted(datum, self.eps)
        return datum

    def apply(self, data):
        return ProblemData(self._shift(data.rho_o, 'initial'),
                           self._shift(data.rho_a, 'left'),
                           self._shift(data.rho_b, 'right'))


@dataclass(frozen=True, eq=False)
class StabilityResult:
    """
    Distancia medida ‖ρ(T) - σ(T)‖_L1 frente a la cota A(1 + B T e^{B T}).
    """

    distances: object
    measured: float
    A: float
    B: float
    final_bound: float
    ratio: float
    report: object

    @property
    def amplification(self):
        """
        Distancia medida relativa a la distancia entre los datos, A(T).
        """

        if self.A == 0.0:
            return 0.0
        return self.measured / self.A

    def as_dict(self):
        return {
            'distance_initial': self.distances.l1_o,
            'distance_left': float(self.distances.l1_a[-1]),
            'distance_right': float(self.distances.l1_b[-1]),
            'measured': self.measured,
            'A': self.A,
            'B': self.B,
            'final_bound': self.final_bound,
            'ratio': self.ratio,
            'amplification': self.amplification,
        }


def bound_ratio(measured, bound):
    if measured == 0.0:
        return 0.0
    if bound == 0.0:
        return math.inf
    return measured / bound


def stability_experiment(config, perturbation, manager=None):
    """
    Resuelve el problema con los datos de la configuración (ρ) y con los
    datos perturbados (σ) sobre la misma malla, mide la distancia L1 en T
    y la compara con la cota de estabilidad.
    """

    manager = manager or JobManager()

    rho = prepare(config)
    sigma = prepare(config, data=perturbation.apply(rho.data))
    mesh = rho.mesh

    configs = dict((key, config.update(stride=FINAL_ONLY)) for key in ('rho', 'sigma'))
    jobs = {
        'rho': lambda: solve(configs['rho'], entropy_every=0, problem=rho),
        'sigma': lambda: solve(configs['sigma'], mode='monitor', entropy_every=0, problem=sigma),
    }
    trajectories = manager.results_dict(jobs)

    distances = data_distances(rho.projected, sigma.projected, mesh)
    report = stability_constants(rho.kernel_norms, rho.bounds, rho.data_norms,
                                 sigma.data_norms, distances)

    final_rho = trajectories['rho'].final.cells
    final_sigma = trajectories['sigma'].final.cells
    measured = float(mesh.dx * np.sum(np.abs(final_rho - final_sigma)))

    A, B, bound = (float(report.A[-1]), float(report.B[-1]), float(report.final_bound[-1]))
    ratio = bound_ratio(measured, bound)

    logging.info(u'Estabilidad: medido %.6g, A = %.6g, cota %.6g' % (measured, A, bound))
    if measured > bound:
        logging.warning(u'La distancia medida %.17g excede la cota %.17g' % (measured, bound))

    return StabilityResult(distances, measured, A, B, bound, ratio, report)
