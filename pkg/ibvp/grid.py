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
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ibvp import utils
from ibvp.errors import (CFLViolation, ConfigSemantic, InvalidCellCount,
                         InvalidDomain, InvalidMesh, NegativeDatum)


#: sobremuestreo para estimar variación total y norma del supremo
OVERSAMPLING = 16


@dataclass(frozen=True)
class Mesh:
    """
    Malla uniforme de ``]a, b[`` con N celdas y N_T pasos de tiempo.
    """

    a: float
    b: float
    N: int
    dx: float
    dt: float
    lam: float
    alpha: float
    T: float
    NT: int

    @property
    def centers(self):
        return self.a + (np.arange(1, self.N + 1) - 0.5) * self.dx

    @property
    def interfaces(self):
        return self.a + np.arange(self.N + 1) * self.dx

    @property
    def times(self):
        return np.arange(self.NT + 1) * self.dt

    @property
    def length(self):
        return self.b - self.a

    def check_cfl(self, bounds):
        limit = cfl_lambda(self.alpha, bounds, self.dx)
        if self.alpha < bounds.L * (1.0 - 1e-12):
            raise CFLViolation(u'alpha = %.17g < L = %.17g' % (self.alpha, bounds.L))
        if self.lam > limit * (1.0 + 1e-12):
            raise CFLViolation(u'lambda = %.17g excede el límite CFL %.17g'
                               % (self.lam, limit))


def cfl_lambda(alpha, bounds, dx):
    """
    Retorna el mayor λ admisible, (1/3) min{1/α, 1/(2L + CΔx)}.
    """

    return min(1.0 / alpha, 1.0 / (2.0 * bounds.L + bounds.C * dx)) / 3.0


def default_alpha(bounds):
    return max(bounds.L, 1.0)


def resolve_alpha(alpha, bounds):
    """
    ``'auto'`` (o None) da max(L, 1); un valor menor se eleva a max(L, 1).
    """

    floor = default_alpha(bounds)
    if alpha is None or alpha == 'auto':
        return floor

    alpha = float(alpha)
    if alpha < floor:
        logging.warning(u'alpha = %.6g < max(L, 1) = %.6g; se usa alpha = %.6g'
                        % (alpha, floor, floor))
        return floor
    return alpha


def build_mesh(a, b, N, T, alpha, bounds, safety=1.0, lam=None):
    """
    Construye la malla y elige el paso de tiempo.

    Sin *lam* el paso es ``safety`` veces el límite CFL, reducido para que
    N_T pasos cubran exactamente T. Con *lam* fijo se verifica la condición
    CFL y T se ajusta a N_T·Δt.
    """

    if not b > a:
        raise InvalidDomain(u'Se requiere b > a: a = %s, b = %s' % (a, b))
    if int(N) != N or N < 1:
        raise InvalidCellCount(u'N debe ser un entero positivo: %s' % N)
    if not T > 0:
        raise InvalidMesh(u'El tiempo final debe ser positivo: %s' % T)
    if not 0 < safety <= 1:
        raise ConfigSemantic([('cfl_safety', u'Debe estar en ]0, 1]: %s' % safety)])

    N = int(N)
    alpha = resolve_alpha(alpha, bounds)
    dx = (b - a) / N
    limit = cfl_lambda(alpha, bounds, dx)

    if lam is None:
        dt_cfl = safety * limit * dx
        NT = max(1, int(math.ceil(T / dt_cfl * (1.0 - 1e-12))))
        dt = T / NT
    else:
        if lam > limit * (1.0 + 1e-12):
            raise CFLViolation(u'lambda = %.17g excede el límite CFL %.17g' % (lam, limit))
        dt = lam * dx
        NT = int(math.floor(T / dt + 1e-9))
        if NT < 1:
            raise InvalidMesh(u'T = %s es menor que un paso de tiempo %s' % (T, dt))
        T = NT * dt

    mesh = Mesh(float(a), float(b), N, dx, dt, dt / dx, alpha, float(T), NT)
    mesh.check_cfl(bounds)

    logging.info(u'Malla: N = %d, dx = %.6g, dt = %.6g, lambda = %.6g, alpha = %.6g, N_T = %d'
                 % (N, dx, dt, mesh.lam, alpha, NT))

    return mesh


def theorem_lambda_admissible(bounds, alpha, dx):
    """
    Indica si λ = 1/(3L) cumple la condición CFL para α, C y Δx dados.
    """

    return 1.0 / (3.0 * bounds.L) <= cfl_lambda(alpha, bounds, dx)


# Datos

class Datum(object):
    """
    Dato escalar s -> valor sobre un intervalo. Las subclases declaran su
    variación total, supremo e ínfimo cuando tienen forma cerrada; None
    indica que deben estimarse.
    """

    kind = None

    def value(self, s):
        raise NotImplementedError

    def total_variation(self, lo, hi):
        return None

    def sup(self, lo, hi):
        return None

    def inf(self, lo, hi):
        return None


class Constant(Datum):
    kind = 'constant'

    def __init__(self, value):
        self.level = float(value)

    def value(self, s):
        return self.level + 0.0 * np.asarray(s, dtype=float)

    def total_variation(self, lo, hi):
        return 0.0

    def sup(self, lo, hi):
        return abs(self.level)

    def inf(self, lo, hi):
        return self.level


class Step(Datum):
    """
    Vale *left* antes de *at* y *right* desde *at*.
    """

    kind = 'step'

    def __init__(self, left, right, at):
        self.left = float(left)
        self.right = float(right)
        self.at = float(at)

    def value(self, s):
        return np.where(np.asarray(s, dtype=float) < self.at, self.left, self.right)

    def _levels(self, lo, hi):
        if self.at <= lo:
            return [self.right]
        if self.at >= hi:
            return [self.left]
        return [self.left, self.right]

    def total_variation(self, lo, hi):
        levels = self._levels(lo, hi)
        return abs(levels[-1] - levels[0])

    def sup(self, lo, hi):
        return max(abs(v) for v in self._levels(lo, hi))

    def inf(self, lo, hi):
        return min(self._levels(lo, hi))


class Sine(Datum):
    """
    ``offset + amplitude sin²(periods π (s - lo)/(hi - lo))`` sobre el
    intervalo ``[lo, hi]`` en que se declara.
    """

    kind = 'sine'

    def __init__(self, amplitude, offset=0.0, periods=1, start=0.0, stop=1.0):
        self.amplitude = float(amplitude)
        self.offset = float(offset)
        self.periods = float(periods)
        self.start = float(start)
        self.stop = float(stop)

    def value(self, s):
        phase = self.periods * np.pi * (np.asarray(s, dtype=float) - self.start)
        return self.offset + self.amplitude * np.sin(phase / (self.stop - self.start)) ** 2

    def _whole(self, lo, hi):
        return lo == self.start and hi == self.stop

    def total_variation(self, lo, hi):
        if self._whole(lo, hi) and self.periods == int(self.periods) and self.periods > 0:
            return 2.0 * self.periods * abs(self.amplitude)
        return None

    def sup(self, lo, hi):
        if self._whole(lo, hi) and self.periods >= 0.5:
            return max(abs(self.offset), abs(self.offset + self.amplitude))
        return None

    def inf(self, lo, hi):
        if self._whole(lo, hi) and self.periods >= 0.5:
            return min(self.offset, self.offset + self.amplitude)
        return None


class Linear(Datum):
    """
    ``max(0, intercept + slope s)``.
    """

    kind = 'linear'

    def __init__(self, slope, intercept=0.0):
        self.slope = float(slope)
        self.intercept = float(intercept)

    def value(self, s):
        return np.maximum(0.0, self.intercept + self.slope * np.asarray(s, dtype=float))

    def total_variation(self, lo, hi):
        return float(abs(self.value(hi) - self.value(lo)))

    def sup(self, lo, hi):
        return float(max(self.value(lo), self.value(hi)))

    def inf(self, lo, hi):
        return float(min(self.value(lo), self.value(hi)))


class Table(Datum):
    """
    Interpolación lineal de una tabla de dos columnas (coordenada, valor).
    """

    kind = 'csv'

    def __init__(self, points, values, path=None):
        order = np.argsort(points)
        self.points = np.asarray(points, dtype=float)[order]
        self.values = np.asarray(values, dtype=float)[order]
        self.path = path

    @classmethod
    def from_csv(cls, path):
        try:
            table = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
        except (OSError, ValueError) as e:
            raise ConfigSemantic([('data.path', u'No se pudo leer %s: %s' % (path, e))])
        if table.shape[1] != 2 or table.shape[0] < 1:
            raise ConfigSemantic([('data.path', u'%s debe tener dos columnas' % path)])
        return cls(table[:, 0], table[:, 1], path)

    def value(self, s):
        return np.interp(s, self.points, self.values)

    def _knots(self, lo, hi):
        inner = self.points[(self.points > lo) & (self.points < hi)]
        return self.value(np.concatenate(([lo], inner, [hi])))

    def total_variation(self, lo, hi):
        return utils.total_variation(self._knots(lo, hi))

    def sup(self, lo, hi):
        return float(np.max(np.abs(self._knots(lo, hi))))

    def inf(self, lo, hi):
        return float(np.min(self._knots(lo, hi)))


class Shifted(Datum):
    """
    Dato *base* desplazado en la constante *shift*.
    """

    def __init__(self, base, shift):
        self.base = base
        self.shift = float(shift)
        self.kind = base.kind

    def value(self, s):
        return self.base.value(s) + self.shift

    def total_variation(self, lo, hi):
        return self.base.total_variation(lo, hi)

    def sup(self, lo, hi):
        low, high = self.base.inf(lo, hi), self.base.sup(lo, hi)
        if low is None or high is None:
            return None
        return max(abs(low + self.shift), abs(high + self.shift))

    def inf(self, lo, hi):
        low = self.base.inf(lo, hi)
        return None if low is None else low + self.shift


def build_datum(spec, lo, hi, base_dir='.'):
    """
    Construye un dato a partir de su especificación ``{"kind": ..., ...}``;
    *lo* y *hi* delimitan el intervalo en que vive (espacio o tiempo).
    """

    params = dict((k, v) for k, v in spec.items() if k != 'kind')
    kind = spec['kind']

    if kind == 'constant':
        return Constant(params['value'])
    if kind == 'step':
        return Step(params['left'], params['right'], params['at'])
    if kind == 'sine':
        return Sine(params['amplitude'], params.get('offset', 0.0),
                    params.get('periods', 1), lo, hi)
    if kind == 'linear':
        return Linear(params['slope'], params.get('intercept', 0.0))
    if kind == 'csv':
        return Table.from_csv(os.path.join(base_dir, params['path']))

    raise ConfigSemantic([('data.kind', u'Tipo de dato desconocido: %s' % kind)])


@dataclass(frozen=True)
class DatumNorms:
    tv: float
    sup: float
    inf: float
    estimated: bool


def datum_norms(datum, lo, hi, resolution, label=''):
    """
    Retorna la variación total, el supremo y el ínfimo de *datum* en
    ``[lo, hi]``: los declarados, o estimados en una malla ``OVERSAMPLING``
    veces más fina que *resolution* celdas.
    """

    tv, sup, inf = datum.total_variation(lo, hi), datum.sup(lo, hi), datum.inf(lo, hi)
    estimated = tv is None or sup is None or inf is None

    if estimated:
        s = np.linspace(lo, hi, OVERSAMPLING * max(1, int(resolution)) + 1)
        values = datum.value(s)
        if tv is None:
            tv = utils.total_variation(values)
        if sup is None:
            sup = float(np.max(np.abs(values)))
        if inf is None:
            inf = float(np.min(values))
        logging.warning(u'Normas del dato %s estimadas por muestreo; las constantes '
                        u'a priori son estimaciones' % label)

    return DatumNorms(float(tv), float(sup), float(inf), estimated)


@dataclass(frozen=True)
class ProblemData:
    rho_o: Datum
    rho_a: Datum
    rho_b: Datum

    def norms(self, mesh):
        return dict(
            initial=datum_norms(self.rho_o, mesh.a, mesh.b, mesh.N, 'inicial'),
            left=datum_norms(self.rho_a, 0.0, mesh.T, mesh.NT, 'izquierdo'),
            right=datum_norms(self.rho_b, 0.0, mesh.T, mesh.NT, 'derecho'),
        )


@dataclass(frozen=True, eq=False)
class BoundaryTraces:
    """
    Promedios temporales ρ_a^n, ρ_b^n para ``n = 0..N_T``.
    """

    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True, eq=False)
class ProjectedData:
    rho0: np.ndarray
    traces: BoundaryTraces
    declared: Optional[dict] = None

    @property
    def rho_a_n(self):
        return self.traces.left

    @property
    def rho_b_n(self):
        return self.traces.right


def _average(datum, lo, hi, panels, label):
    if panels < 4:
        raise ConfigSemantic([('panels', u'Se necesitan al menos 4 subpaneles: %s' % panels)])

    nodes, weights = utils.gauss_nodes(lo, hi, panels)
    values = datum.value(nodes)
    if not np.all(np.isfinite(values)):
        raise NegativeDatum(u'El dato %s no es finito' % label)
    if np.min(values) < 0.0:
        raise NegativeDatum(u'El dato %s toma el valor negativo %.17g'
                            % (label, np.min(values)))
    return np.sum(values * weights, axis=1) / (np.asarray(hi) - np.asarray(lo))


def project_initial(data, mesh, panels=4):
    """
    Retorna los promedios de celda ρ_j^0 = (1/Δx) ∫ ρ_o, ``j = 1..N``.
    """

    x = mesh.interfaces
    return _average(data.rho_o, x[:-1], x[1:], panels, 'inicial')


def project_boundary(data, mesh, panels=4):
    """
    Retorna los promedios ρ_a^n, ρ_b^n sobre cada franja
    ``[t^n, t^{n+1}]``, ``n = 0..N_T``.
    """

    t = np.arange(mesh.NT + 2) * mesh.dt
    return BoundaryTraces(
        left=_average(data.rho_a, t[:-1], t[1:], panels, 'izquierdo'),
        right=_average(data.rho_b, t[:-1], t[1:], panels, 'derecho'),
    )


def project(data, mesh, panels=4):
    return ProjectedData(project_initial(data, mesh, panels),
                         project_boundary(data, mesh, panels),
                         data.norms(mesh))
