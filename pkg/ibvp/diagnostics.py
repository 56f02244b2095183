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
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from ibvp.errors import StateMismatch
from ibvp.kernel import nonlocal_average
from ibvp.solver import numerical_flux


NAN = float('nan')

#: holguras absolutas de cada cota
TOLERANCES = {
    'l1': 1e-10,
    'linf': 1e-10,
    'tv': 1e-8,
    'timediff': 1e-8,
    'xt': 1e-8,
    'entropy': 1e-12,
}

#: columnas de diagnostics.csv, en orden
COLUMNS = ('step', 't', 'l1', 'linf', 'tv', 'min', 'mass', 'time_diff',
           'entropy_plus_max', 'entropy_minus_max', 'margin_l1', 'margin_linf',
           'margin_tv', 'margin_timediff', 'margin_xt', 'mass_residual')


@dataclass(frozen=True)
class DiagnosticsRecord:
    """
    Normas medidas en el paso *step* y sus márgenes respecto de las cotas a
    priori. Los campos que no se midieron valen NaN.
    """

    step: int
    t: float
    l1: float
    linf: float
    tv: float
    min_cell: float
    mass: float
    time_diff: float = NAN
    entropy_plus_max: float = NAN
    entropy_minus_max: float = NAN
    margin_l1: float = NAN
    margin_linf: float = NAN
    margin_tv: float = NAN
    margin_timediff: float = NAN
    margin_xt: float = NAN
    mass_residual: float = NAN
    xt_sum: float = NAN

    def row(self):
        values = dict((f.name, getattr(self, f.name)) for f in fields(self))
        values['min'] = values.pop('min_cell')
        return [values[column] for column in COLUMNS]


def measure(state, mesh):
    """
    Mide normas L1, L∞, variación total (con celdas fantasma), mínimo y
    masa del estado.
    """

    cells = state.cells
    return DiagnosticsRecord(
        step=state.n,
        t=state.t,
        l1=float(mesh.dx * np.sum(np.abs(cells))),
        linf=float(np.max(np.abs(cells))),
        tv=float(np.sum(np.abs(np.diff(state.extended())))),
        min_cell=float(np.min(cells)),
        mass=float(mesh.dx * np.sum(cells)),
    )


def time_difference(prev, next, mesh):
    """
    Σ_{j=0..N+1} Δx |ρ_j^{n+1} - ρ_j^n|, fantasmas incluidos.
    """

    return float(mesh.dx * np.sum(np.abs(next.extended() - prev.extended())))


def positive_part(s):
    return np.maximum(s, 0.0)


def negative_part(s):
    return np.maximum(-s, 0.0)


def sgn_plus(s):
    return np.where(s > 0.0, 1.0, 0.0)


def sgn_minus(s):
    return np.where(s < 0.0, -1.0, 0.0)


class EntropyFunctionals(object):
    """
    Funcionales H, G y L del paso que parte de *state*.

    Los argumentos ``u``, ``v`` se refieren a las N + 1 interfaces; ``k``
    puede ser una columna ``(K, 1)`` para evaluar toda una grilla de
    niveles a la vez. G trunca por arriba (máximo con k) y L por abajo
    (mínimo con k).
    """

    def __init__(self, model, mesh, state, R=None):
        self.model = model
        self.mesh = mesh
        self.t = state.t
        self.x = mesh.interfaces
        self.R = state.interface_R if R is None else R

    def F(self, u, v):
        return numerical_flux(self.model, self.t, self.x, u, v, self.R, self.mesh.alpha)

    def f_at(self, k):
        return self.model.value(self.t, self.x, k, self.R)

    def G(self, u, v, k):
        return self.F(np.maximum(u, k), np.maximum(v, k)) - self.F(k, k)

    def L(self, u, v, k):
        return self.F(k, k) - self.F(np.minimum(u, k), np.minimum(v, k))

    def H(self, u, v, z):
        """
        Retorna ``v - λ (F_{j+1/2}(v, z) - F_{j-1/2}(u, v))`` para las N
        celdas; *u*, *v*, *z* tienen largo N.
        """

        right = numerical_flux(self.model, self.t, self.x[1:], v, z, self.R[1:],
                               self.mesh.alpha)
        left = numerical_flux(self.model, self.t, self.x[:-1], u, v, self.R[:-1],
                              self.mesh.alpha)
        return v - self.mesh.lam * (right - left)


def default_k_grid(prev, next, size=32):
    """
    Niveles k donde se evalúan las desigualdades: los valores de ambos
    estados más *size* puntos uniformes en ``[min - δ, max + δ]`` con
    δ = 0.05 (max - min).
    """

    values = np.concatenate((prev.extended(), next.extended()))
    lo, hi = float(np.min(values)), float(np.max(values))
    delta = 0.05 * (hi - lo) if hi > lo else 0.05 * max(1.0, abs(hi))
    return np.unique(np.concatenate((values, np.linspace(lo - delta, hi + delta, size))))


@dataclass(frozen=True, eq=False)
class EntropyResiduals:
    plus_max: float
    minus_max: float
    plus: np.ndarray
    minus: np.ndarray
    k_grid: np.ndarray


def entropy_residuals(prev, next, mesh, dk, model, k_grid=None):
    """
    Evalúa los residuos de las desigualdades de entropía discretas para
    cada celda y cada nivel k; ambos deben ser ≤ 0.
    """

    if next.n != prev.n + 1 or next.cells.shape != prev.cells.shape:
        raise StateMismatch(u'Los estados %s y %s no son consecutivos' % (prev.n, next.n))

    if k_grid is None:
        k_grid = default_k_grid(prev, next)
    k = np.asarray(k_grid, dtype=float)[:, None]

    functionals = EntropyFunctionals(model, mesh, prev, nonlocal_average(dk, prev.cells))
    ext = prev.extended()
    u, v = ext[:-1], ext[1:]
    lam = mesh.lam

    G = functionals.G(u, v, k)
    L = functionals.L(u, v, k)
    fk = functionals.f_at(k)
    df = fk[:, 1:] - fk[:, :-1]

    new = next.cells[None, :] - k
    old = prev.cells[None, :] - k

    plus = (positive_part(new) - positive_part(old) + lam * (G[:, 1:] - G[:, :-1])
            + lam * sgn_plus(new) * df)
    minus = (negative_part(new) - negative_part(old) + lam * (L[:, 1:] - L[:, :-1])
             + lam * sgn_minus(new) * df)

    return EntropyResiduals(float(np.max(plus)), float(np.max(minus)), plus, minus,
                            np.asarray(k_grid, dtype=float))


@dataclass(frozen=True)
class Violation:
    name: str
    step: int
    measured: float
    bound: float
    margin: float


def compare_bounds(record, constants, mode='monitor'):
    """
    Calcula los márgenes cota - medido del registro y retorna
    ``(registro, violaciones)``. Un margen menor que menos la holgura de
    la cota es una violación; en modo ``monitor`` además se registra una
    advertencia.
    """

    n = record.step
    checks = [
        ('l1', record.l1, constants.C1[n]),
        ('linf', record.linf, constants.linf_bound[n]),
        ('tv', record.tv, constants.Cx[n]),
    ]
    if n > 0 and not np.isnan(record.time_diff):
        checks.append(('timediff', record.time_diff, constants.timediff_bound[n]))
    if n > 0 and not np.isnan(record.xt_sum):
        checks.append(('xt', record.xt_sum, constants.Cxt[n]))

    margins = {}
    violations = []
    for name, measured, bound in checks:
        margin = float(bound - measured)
        margins['margin_%s' % name] = margin
        if not margin >= -TOLERANCES[name]:
            violations.append(Violation(name, n, measured, float(bound), margin))

    for name, value in (('entropy_plus', record.entropy_plus_max),
                        ('entropy_minus', record.entropy_minus_max)):
        if not np.isnan(value) and value > TOLERANCES['entropy']:
            violations.append(Violation(name, n, value, 0.0, -value))

    if violations and mode == 'monitor':
        for v in violations:
            logging.warning(u'Cota %s violada en el paso %d: medido %.17g, cota %.17g'
                            % (v.name, v.step, v.measured, v.bound))

    return replace(record, **margins), violations


def entropy_due(n, N, every=None):
    """
    Indica si el paso *n* lleva verificación de entropía: todos los pasos
    para N ≤ 512, uno de cada 8 si no, salvo que *every* lo fije.
    """

    if every is None:
        every = 1 if N <= 512 else 8
    return every > 0 and n % every == 0


def worst(records, field):
    values = [getattr(r, field) for r in records if not np.isnan(getattr(r, field))]
    return max(values) if values else None
