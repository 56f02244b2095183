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
import numbers
import os

import django
from django import forms
from django.conf import settings

from ibvp.errors import ConfigSemantic, IBVPError
from ibvp.flux import FLUXES
from ibvp.grid import build_datum, datum_norms
from ibvp.kernel import KERNELS, MODES
from ibvp.models import FluxConfig, KernelConfig, RunConfig


if not settings.configured:
    settings.configure(USE_I18N=False, LOGGING_CONFIG=None)
    django.setup()


MODES_CHECK = (('monitor', 'monitor'), ('strict', 'strict'))

DATA_KINDS = {
    'constant': ('value',),
    'step': ('left', 'right', 'at'),
    'sine': ('amplitude',),
    'linear': ('slope',),
    'csv': ('path',),
}

FLUX_PARAMS = {
    'zero-flux': (),
    'linear-advection': ('c',),
    'nonlocal-lwr': ('v_max', 'rho_max'),
    'nonlocal-lwr-varspeed': ('v_max', 'rho_max', 'epsilon'),
}

DEFAULTS = {
    'alpha': 'auto',
    'cfl_safety': 1.0,
    'lambda': None,
    'mode': 'monitor',
    'stride': 1,
    'k_grid': 32,
    'entropy_every': None,
    'out': '.',
}

REQUIRED = u'El campo es obligatorio'


def invalid(message, path=None):
    """
    Error de validación. *path* precisa la ruta dentro del campo, p. ej.
    ``kernel.h``; los mensajes se interpolan con los parámetros del error.
    """

    return forms.ValidationError(message.replace('%', '%%'), code='invalid',
                                 params={'path': path})


def is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def integer_field(minimum, message=None, required=True):
    message = message or u'Debe ser un entero mayor o igual que %d' % minimum
    return forms.IntegerField(min_value=minimum, required=required, error_messages={
        'required': REQUIRED,
        'invalid': message,
        'min_value': message,
    })


def float_field(required=True):
    return forms.FloatField(required=required, error_messages={
        'required': REQUIRED,
        'invalid': u'Debe ser un número finito',
    })


def object_field():
    return forms.JSONField(error_messages={
        'required': REQUIRED,
        'invalid': u'Debe ser un objeto',
    })


class RunConfigForm(forms.Form):
    """
    Valida la configuración JSON de una ejecución y construye el RunConfig.
    """

    domain = object_field()
    N = integer_field(1, u'Debe ser un entero positivo')
    T = float_field()
    alpha = forms.Field(error_messages={'required': REQUIRED})
    cfl_safety = float_field()
    kernel = object_field()
    flux = object_field()
    data = object_field()
    mode = forms.ChoiceField(choices=MODES_CHECK, error_messages={
        'required': REQUIRED,
        'invalid_choice': u'Debe ser monitor o strict',
    })
    stride = integer_field(1)
    k_grid = integer_field(2)
    entropy_every = integer_field(0, required=False)
    out = forms.CharField(error_messages={'required': u'Debe ser una ruta'})

    def __init__(self, data, base_dir='.'):
        merged = dict(DEFAULTS)
        merged.update(data)
        super(RunConfigForm, self).__init__(merged)
        # ``lambda`` no puede declararse como atributo de clase
        self.fields['lambda'] = float_field(required=False)
        self.base_dir = base_dir

    def clean_domain(self):
        domain = self.cleaned_data['domain']
        if not isinstance(domain, dict):
            raise invalid(u'Debe ser un objeto {"a": ..., "b": ...}')

        a, b = domain.get('a'), domain.get('b')
        if not is_number(a):
            raise invalid(u'Debe ser un número', 'domain.a')
        if not is_number(b):
            raise invalid(u'Debe ser un número', 'domain.b')
        if not b > a:
            raise invalid(u'Se requiere b > a', 'domain.b')

        return float(a), float(b)

    def clean_T(self):
        T = self.cleaned_data['T']
        if not T > 0:
            raise invalid(u'Debe ser un número positivo')
        return T

    def clean_alpha(self):
        alpha = self.cleaned_data['alpha']
        if alpha == 'auto':
            return alpha
        if not is_number(alpha) or not alpha > 0:
            raise invalid(u'Debe ser "auto" o un número positivo')
        return float(alpha)

    def clean_cfl_safety(self):
        safety = self.cleaned_data['cfl_safety']
        if not 0 < safety <= 1:
            raise invalid(u'Debe estar en ]0, 1]')
        return safety

    def clean_lambda(self):
        lam = self.cleaned_data['lambda']
        if lam is not None and not lam > 0:
            raise invalid(u'Debe ser null o un número positivo')
        return lam

    def clean_kernel(self):
        kernel = self.cleaned_data['kernel']
        if not isinstance(kernel, dict):
            raise invalid(u'Debe ser un objeto')

        name = kernel.get('name')
        if name not in KERNELS:
            raise invalid(u'Núcleo desconocido: %s' % name, 'kernel.name')

        h = kernel.get('h')
        if not is_number(h) or not h > 0:
            raise invalid(u'Debe ser un número positivo', 'kernel.h')

        discretization = kernel.get('discretization', 'midpoint')
        if discretization not in MODES:
            raise invalid(u'Debe ser uno de %s' % (MODES,), 'kernel.discretization')

        lag = kernel.get('lag')
        if lag is not None:
            if name != 'lookahead':
                raise invalid(u'Solo el núcleo lookahead acepta desfase', 'kernel.lag')
            if not is_number(lag) or not 0 <= lag < h:
                raise invalid(u'Debe estar en [0, h)', 'kernel.lag')
            lag = float(lag)

        return KernelConfig(name, float(h), discretization, lag)

    def clean_flux(self):
        flux = self.cleaned_data['flux']
        if not isinstance(flux, dict):
            raise invalid(u'Debe ser un objeto')

        name = flux.get('name')
        if name not in FLUXES:
            raise invalid(u'Flujo desconocido: %s' % name, 'flux.name')

        params = flux.get('params') or {}
        for key, value in params.items():
            if key not in FLUX_PARAMS[name]:
                raise invalid(u'Parámetro desconocido: %s' % key, 'flux.params.%s' % key)
            if not is_number(value):
                raise invalid(u'Debe ser un número', 'flux.params.%s' % key)
        if params.get('rho_max', 1.0) <= 0:
            raise invalid(u'Debe ser positivo', 'flux.params.rho_max')

        box = flux.get('box') or {}
        cleaned = {}
        for key in ('rho', 'R'):
            pair = box.get(key)
            if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                    or not all(is_number(v) for v in pair) or pair[1] < pair[0]):
                raise invalid(u'Debe ser un par [lo, hi] con lo <= hi', 'flux.box.%s' % key)
            cleaned[key] = [float(pair[0]), float(pair[1])]

        return FluxConfig(name, dict((k, float(v)) for k, v in params.items()), cleaned)

    def clean_data(self):
        data = self.cleaned_data['data']
        if not isinstance(data, dict):
            raise invalid(u'Debe ser un objeto')

        for key in ('initial', 'left', 'right'):
            spec = data.get(key)
            if not isinstance(spec, dict):
                raise invalid(u'Falta la especificación', 'data.%s' % key)

            kind = spec.get('kind')
            if kind not in DATA_KINDS:
                raise invalid(u'Tipo desconocido: %s' % kind, 'data.%s.kind' % key)

            for param in DATA_KINDS[kind]:
                if param not in spec:
                    raise invalid(u'Falta el parámetro', 'data.%s.%s' % (key, param))

            if kind == 'csv':
                path = os.path.join(self.base_dir, spec['path'])
                if not os.path.isfile(path):
                    raise invalid(u'No existe el archivo %s' % path, 'data.%s.path' % key)
            else:
                for param, value in spec.items():
                    if param != 'kind' and not is_number(value):
                        raise invalid(u'Debe ser un número', 'data.%s.%s' % (key, param))

        return dict((key, dict(data[key])) for key in ('initial', 'left', 'right'))


    def clean(self):
        """
        Rechaza campos desconocidos y verifica que la región de validez del
        flujo cubra el rango de los datos: ρ y R deben poder tomar todos sus
        valores. La comparación con las cotas a priori en T se hace al
        preparar el problema.
        """

        cleaned_data = super(RunConfigForm, self).clean()

        for name in sorted(set(self.data) - set(self.fields)):
            self.add_error(None, invalid(u'Campo desconocido', name))

        if self.errors:
            return cleaned_data

        a, b = cleaned_data['domain']
        T = cleaned_data['T']
        box = cleaned_data['flux'].box
        N = cleaned_data['N']

        lo, hi = [], []
        for key, start, stop in (('initial', a, b), ('left', 0.0, T), ('right', 0.0, T)):
            try:
                datum = build_datum(cleaned_data['data'][key], start, stop, self.base_dir)
                norms = datum_norms(datum, start, stop, N, key)
            except IBVPError as e:
                raise invalid(u'%s' % e, 'data.%s' % key)

            if norms.inf < 0:
                raise invalid(u'El dato toma valores negativos', 'data.%s' % key)
            lo.append(norms.inf)
            hi.append(norms.sup)

        low, high = min(lo), max(hi)
        for key in ('rho', 'R'):
            if low < box[key][0] or high > box[key][1]:
                raise invalid(u'La región [%s, %s] no cubre el rango de los datos [%s, %s]'
                              % (box[key][0], box[key][1], low, high), 'flux.box.%s' % key)

        return cleaned_data

    def error_list(self):
        """
        Pares ``(ruta, mensaje)`` ordenados por ruta; la ruta es la del
        error cuando la indica y si no el nombre del campo.
        """

        pairs = []
        for name, errors in self.errors.as_data().items():
            for error in errors:
                path = (error.params or {}).get('path') or name
                pairs.extend((path, message) for message in error.messages)
        return sorted(pairs, key=lambda pair: pair[0])

    def save(self):
        """
        Retorna el RunConfig validado.
        """

        data = self.cleaned_data
        a, b = data['domain']
        config = RunConfig(a=a, b=b, N=data['N'], T=data['T'], kernel=data['kernel'],
                           flux=data['flux'], data=data['data'], alpha=data['alpha'],
                           cfl_safety=data['cfl_safety'], lam=data['lambda'],
                           mode=data['mode'], stride=data['stride'], k_grid=data['k_grid'],
                           entropy_every=data['entropy_every'], out=data['out'],
                           base_dir=self.base_dir)
        logging.info(u'Configuración validada: N = %d, T = %s' % (config.N, config.T))
        return config


def validate(data, base_dir='.'):
    """
    Valida *data* y retorna el RunConfig; lanza ConfigSemantic con todos los
    errores encontrados.
    """

    form = RunConfigForm(data, base_dir)
    if not form.is_valid():
        raise ConfigSemantic(form.error_list())
    return form.save()
