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
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ibvp.errors import ConfigSemantic, EmptyBox, InvalidFlux, NonFiniteValue


#: cota mínima de L y C; mantiene la condición CFL bien definida
FLOOR = 1e-6

#: factor de seguridad sobre las cotas muestreadas
SAFETY = 1.25

FD_STEP = np.cbrt(np.finfo(float).eps)


@dataclass(frozen=True)
class FluxBox:
    """
    Región de validez (t, x, ρ, R) sobre la que se toman las cotas del flujo.
    """

    t: Tuple[float, float]
    x: Tuple[float, float]
    rho: Tuple[float, float]
    R: Tuple[float, float]

    def __post_init__(self):
        for name in ('t', 'x', 'rho', 'R'):
            lo, hi = getattr(self, name)
            if not (np.isfinite(lo) and np.isfinite(hi) and hi >= lo):
                raise EmptyBox(u'Rango vacío para %s: [%s, %s]' % (name, lo, hi))

    def contains(self, t, x, rho, R, slack=1e-12):
        inside = True
        for name, value in (('t', t), ('x', x), ('rho', rho), ('R', R)):
            lo, hi = getattr(self, name)
            value = np.asarray(value)
            inside = inside & (value >= lo - slack) & (value <= hi + slack)
        return inside

    def sample(self, samples, rng):
        return tuple(rng.uniform(lo, hi, samples)
                     for lo, hi in (self.t, self.x, self.rho, self.R))


@dataclass(frozen=True)
class FluxBounds:
    L: float
    C: float
    sup_d_rhox: Optional[float]
    sup_d_rhoR: Optional[float]
    box: FluxBox
    analytic: bool = False


class FluxModel(object):
    """
    Flujo f(t, x, ρ, R) con sus derivadas parciales.

    Las subclases implementan ``value`` y las derivadas primeras; las
    segundas se obtienen por diferencias centradas de las primeras salvo que
    la subclase las declare (``analytic_second = True``). Todos los métodos
    aceptan arreglos y hacen broadcasting.
    """

    name = None
    analytic_second = False

    def value(self, t, x, rho, R):
        raise NotImplementedError

    def d_rho(self, t, x, rho, R):
        raise NotImplementedError

    def d_x(self, t, x, rho, R):
        raise NotImplementedError

    def d_R(self, t, x, rho, R):
        raise NotImplementedError

    def _difference(self, func, t, x, rho, R, wrt):
        args = dict(t=t, x=x, rho=rho, R=R)
        center = np.asarray(args[wrt], dtype=float)
        step = FD_STEP * np.maximum(1.0, np.abs(center))
        args[wrt] = center + step
        upper = func(**args)
        args[wrt] = center - step
        lower = func(**args)
        return (upper - lower) / (2.0 * step)

    def d_xx(self, t, x, rho, R):
        return self._difference(self.d_x, t, x, rho, R, 'x')

    def d_xR(self, t, x, rho, R):
        return self._difference(self.d_x, t, x, rho, R, 'R')

    def d_RR(self, t, x, rho, R):
        return self._difference(self.d_R, t, x, rho, R, 'R')

    def d_rhox(self, t, x, rho, R):
        return self._difference(self.d_rho, t, x, rho, R, 'x')

    def d_rhoR(self, t, x, rho, R):
        return self._difference(self.d_rho, t, x, rho, R, 'R')

    def analytic_bounds(self, box):
        """
        Retorna ``(L, C, sup_d_rhox, sup_d_rhoR)`` sobre *box*, o None si el
        modelo no declara cotas cerradas.
        """

        return None

    def __repr__(self):
        return '<%s %s>' % (self.__class__.__name__, self.name)


def _zeros(*args):
    return np.zeros(np.broadcast(*[np.asarray(a) for a in args]).shape)


class ZeroFlux(FluxModel):
    name = 'zero-flux'
    analytic_second = True

    def value(self, t, x, rho, R):
        return _zeros(t, x, rho, R)

    d_rho = d_x = d_R = value
    d_xx = d_xR = d_RR = d_rhox = d_rhoR = value

    def analytic_bounds(self, box):
        return FLOOR, FLOOR, 0.0, 0.0


class LinearAdvection(FluxModel):
    """
    Transporte lineal f = c ρ, independiente de R.
    """

    name = 'linear-advection'
    analytic_second = True

    def __init__(self, c=1.0):
        self.c = float(c)

    def value(self, t, x, rho, R):
        return self.c * rho + _zeros(t, x, rho, R)

    def d_rho(self, t, x, rho, R):
        return self.c + _zeros(t, x, rho, R)

    def d_x(self, t, x, rho, R):
        return _zeros(t, x, rho, R)

    d_R = d_xx = d_xR = d_RR = d_rhox = d_rhoR = d_x

    def analytic_bounds(self, box):
        return max(abs(self.c), FLOOR), FLOOR, 0.0, 0.0


class NonlocalLWR(FluxModel):
    """
    Flujo de tráfico f = ρ v_max (1 - R/ρ_max).
    """

    name = 'nonlocal-lwr'
    analytic_second = True

    def __init__(self, v_max=1.0, rho_max=1.0):
        self.v_max = float(v_max)
        self.rho_max = float(rho_max)

    def speed(self, x):
        return self.v_max + 0.0 * np.asarray(x, dtype=float)

    def speed_x(self, x):
        return 0.0 * np.asarray(x, dtype=float)

    def speed_xx(self, x):
        return 0.0 * np.asarray(x, dtype=float)

    def value(self, t, x, rho, R):
        return rho * self.speed(x) * (1.0 - R / self.rho_max) + _zeros(t)

    def d_rho(self, t, x, rho, R):
        return self.speed(x) * (1.0 - R / self.rho_max) + _zeros(t, rho)

    def d_x(self, t, x, rho, R):
        return rho * self.speed_x(x) * (1.0 - R / self.rho_max) + _zeros(t)

    def d_R(self, t, x, rho, R):
        return -rho * self.speed(x) / self.rho_max + _zeros(t, R)

    def d_xx(self, t, x, rho, R):
        return rho * self.speed_xx(x) * (1.0 - R / self.rho_max) + _zeros(t)

    def d_xR(self, t, x, rho, R):
        return -rho * self.speed_x(x) / self.rho_max + _zeros(t, R)

    def d_RR(self, t, x, rho, R):
        return _zeros(t, x, rho, R)

    def d_rhox(self, t, x, rho, R):
        return self.speed_x(x) * (1.0 - R / self.rho_max) + _zeros(t, rho)

    def d_rhoR(self, t, x, rho, R):
        return -self.speed(x) / self.rho_max + _zeros(t, rho, R)

    def _congestion(self, box):
        return max(abs(1.0 - box.R[0] / self.rho_max), abs(1.0 - box.R[1] / self.rho_max))

    def analytic_bounds(self, box):
        m = self._congestion(box)
        L = max(self.v_max * m, FLOOR)
        C = max(self.v_max / self.rho_max, FLOOR)
        return L, C, 0.0, self.v_max / self.rho_max


class VarSpeedLWR(NonlocalLWR):
    """
    Flujo de tráfico con velocidad máxima variable en el espacio,
    v(x) = v_max (1 + ε sin(2π (x - a)/(b - a))).
    """

    name = 'nonlocal-lwr-varspeed'

    def __init__(self, v_max=1.0, rho_max=1.0, epsilon=0.25, a=0.0, b=1.0):
        super(VarSpeedLWR, self).__init__(v_max, rho_max)
        if not 0 <= epsilon < 1:
            raise ConfigSemantic([('flux.params.epsilon',
                                   u'Debe estar en [0, 1): %s' % epsilon)])
        self.epsilon = float(epsilon)
        self.a = float(a)
        self.b = float(b)
        self.wavenumber = 2.0 * np.pi / (self.b - self.a)

    def _phase(self, x):
        return self.wavenumber * (np.asarray(x, dtype=float) - self.a)

    def speed(self, x):
        return self.v_max * (1.0 + self.epsilon * np.sin(self._phase(x)))

    def speed_x(self, x):
        return self.v_max * self.epsilon * self.wavenumber * np.cos(self._phase(x))

    def speed_xx(self, x):
        return -self.v_max * self.epsilon * self.wavenumber ** 2 * np.sin(self._phase(x))

    def analytic_bounds(self, box):
        m = self._congestion(box)
        top = self.v_max * (1.0 + self.epsilon)
        slope = self.v_max * self.epsilon * self.wavenumber
        L = max(top * m, FLOOR)
        C = max(slope * m, top / self.rho_max, slope * self.wavenumber * m,
                slope / self.rho_max, FLOOR)
        return L, C, slope * m, top / self.rho_max


FLUXES = {
    ZeroFlux.name: ZeroFlux,
    LinearAdvection.name: LinearAdvection,
    NonlocalLWR.name: NonlocalLWR,
    VarSpeedLWR.name: VarSpeedLWR,
}


def build_flux(config, a, b):
    """
    Construye el modelo descrito por la sección ``flux`` de la configuración.
    El flujo de velocidad variable recibe el dominio si no lo declara.
    """

    params = dict(config.get('params') or {})
    if config['name'] == VarSpeedLWR.name:
        params.setdefault('a', a)
        params.setdefault('b', b)
    return FLUXES[config['name']](**params)


class BoxMonitor(object):
    """
    Cuenta las evaluaciones del flujo fuera de la región de validez y avisa
    una sola vez por ejecución.
    """

    def __init__(self, box):
        self.box = box
        self.outside = 0

    def record(self, t, x, rho, R):
        count = int(np.size(rho) - np.count_nonzero(self.box.contains(t, x, rho, R)))
        if count and not self.outside:
            logging.warning(u'Evaluaciones del flujo fuera de la región de validez: %s'
                            % (self.box,))
        self.outside += count


def evaluate_flux(model, t, x, rho, R, monitor=None):
    value = model.value(t, x, rho, R)
    if not np.all(np.isfinite(value)):
        raise NonFiniteValue(u'El flujo %s retornó valores no finitos' % model.name)

    if monitor is not None:
        monitor.record(t, x, rho, R)

    return value


def _ratio(numerator, rho):
    rho = np.abs(rho)
    mask = rho > 1e-12
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(numerator[mask]) / rho[mask]))


def sampled_bounds(model, box, samples, rng):
    """
    Estima ``(L, C, sup_d_rhox, sup_d_rhoR)`` por muestreo en *box*, sin
    factor de seguridad.
    """

    t, x, rho, R = box.sample(samples, rng)
    L = float(np.max(np.abs(model.d_rho(t, x, rho, R))))
    C = max(_ratio(model.d_x(t, x, rho, R), rho),
            _ratio(model.d_R(t, x, rho, R), rho),
            _ratio(model.d_xx(t, x, rho, R), rho),
            _ratio(model.d_xR(t, x, rho, R), rho),
            _ratio(model.d_RR(t, x, rho, R), rho))
    sup_d_rhox = float(np.max(np.abs(model.d_rhox(t, x, rho, R))))
    sup_d_rhoR = float(np.max(np.abs(model.d_rhoR(t, x, rho, R))))
    return L, C, sup_d_rhox, sup_d_rhoR


def flux_bounds(model, box, samples=1000, seed=0):
    """
    Retorna las constantes L, C y las normas de ∂²_{ρx} f, ∂²_{ρR} f sobre
    *box*: las cotas cerradas del modelo si las declara, si no las
    muestreadas multiplicadas por ``SAFETY``.
    """

    if samples < 1000:
        raise ConfigSemantic([('samples', u'Se necesitan al menos 1000 muestras: %s' % samples)])

    declared = model.analytic_bounds(box)
    if declared is not None:
        L, C, sup_d_rhox, sup_d_rhoR = declared
        return FluxBounds(L, C, sup_d_rhox, sup_d_rhoR, box, analytic=True)

    logging.warning(u'El flujo %s no declara cotas; se estiman por muestreo' % model.name)
    rng = np.random.default_rng(seed)
    L, C, sup_d_rhox, sup_d_rhoR = [SAFETY * v for v in sampled_bounds(model, box, samples, rng)]
    return FluxBounds(max(L, FLOOR), max(C, FLOOR), sup_d_rhox, sup_d_rhoR, box)


def audit_flux(model, box, samples=1000, seed=1, step=1e-5, rtol=1e-6):
    """
    Verifica f(t, x, 0, R) = 0 y que cada derivada declarada coincida con
    diferencias centradas.
    """

    rng = np.random.default_rng(seed)
    t, x, rho, R = box.sample(samples, rng)

    at_zero = np.abs(model.value(t, x, np.zeros_like(rho), R))
    if np.max(at_zero) > 1e-12:
        raise InvalidFlux(u'f(t, x, 0, R) no se anula para %s' % model.name)

    checks = [(model.value, model.d_rho, 'rho'), (model.value, model.d_x, 'x'),
              (model.value, model.d_R, 'R')]
    if model.analytic_second:
        checks += [(model.d_x, model.d_xx, 'x'), (model.d_x, model.d_xR, 'R'),
                   (model.d_R, model.d_RR, 'R'), (model.d_rho, model.d_rhox, 'x'),
                   (model.d_rho, model.d_rhoR, 'R')]

    args = dict(t=t, x=x, rho=rho, R=R)
    for func, derivative, wrt in checks:
        upper = dict(args, **{wrt: args[wrt] + step})
        lower = dict(args, **{wrt: args[wrt] - step})
        fd = (func(**upper) - func(**lower)) / (2.0 * step)
        exact = derivative(**args)
        error = np.abs(fd - exact) / np.maximum(1.0, np.abs(exact))
        if np.max(error) > rtol:
            raise InvalidFlux(u'%s de %s no coincide con diferencias finitas'
                              % (derivative.__name__, model.name))


def audit_bounds(model, bounds, samples=10000, seed=2):
    """
    Compara las cotas declaradas con muestras nuevas de la región de
    validez; retorna las magnitudes muestreadas.
    """

    rng = np.random.default_rng(seed)
    measured = sampled_bounds(model, bounds.box, samples, rng)
    declared = (bounds.L, bounds.C, bounds.sup_d_rhox, bounds.sup_d_rhoR)
    names = ('L', 'C', 'sup_d_rhox', 'sup_d_rhoR')

    for name, value, limit in zip(names, measured, declared):
        if limit is not None and value > limit * (1.0 + 1e-12) + 1e-14:
            raise InvalidFlux(u'La cota %s = %.17g no domina el valor muestreado %.17g'
                              % (name, limit, value))

    return dict(zip(names, measured))
