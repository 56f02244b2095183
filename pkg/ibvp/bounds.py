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


from dataclasses import dataclass, fields

import numpy as np

from ibvp import utils
from ibvp.errors import ConfigSemantic, MissingNorm, NonPositiveWindow


@dataclass(frozen=True, eq=False)
class DataNorms:
    """
    Normas de los datos proyectados. Las tablas van indexadas por paso
    ``n = 0..N_T``: normas L1 de las trazas sobre ``[0, t^n]``, supremos y
    variaciones acumuladas.
    """

    dx: float
    dt: float
    length: float
    times: np.ndarray
    l1_o: float
    linf_o: float
    tv_o: float
    tv_start: float
    l1_a: np.ndarray
    l1_b: np.ndarray
    linf_a: np.ndarray
    linf_b: np.ndarray
    tv_a: np.ndarray
    tv_b: np.ndarray
    jump_a: np.ndarray
    jump_b: np.ndarray
    estimated: bool = False

    @property
    def maxdata(self):
        return np.maximum(self.linf_o, np.maximum(self.linf_a, self.linf_b))

    @property
    def tv_data(self):
        return self.tv_o + self.tv_a + self.tv_b


def _trace_tables(trace, NT, dt):
    trace = np.asarray(trace[:NT + 1], dtype=float)
    jumps = np.concatenate(([0.0], np.abs(np.diff(trace))))
    return dict(
        l1=dt * np.concatenate(([0.0], np.cumsum(np.abs(trace[:NT])))),
        linf=np.maximum.accumulate(np.abs(trace)),
        tv=np.cumsum(jumps),
        jump=jumps,
    )


def data_norms(projected, mesh):
    """
    Construye las tablas de normas a partir de los datos proyectados sobre
    *mesh*.
    """

    rho0 = np.asarray(projected.rho0, dtype=float)
    left = _trace_tables(projected.traces.left, mesh.NT, mesh.dt)
    right = _trace_tables(projected.traces.right, mesh.NT, mesh.dt)

    declared = projected.declared or {}
    initial = declared.get('initial')
    tv_o = initial.tv if initial is not None else utils.total_variation(rho0)
    extended = np.concatenate(([projected.traces.left[0]], rho0, [projected.traces.right[0]]))

    return DataNorms(
        dx=mesh.dx,
        dt=mesh.dt,
        length=mesh.length,
        times=mesh.times,
        l1_o=float(mesh.dx * np.sum(np.abs(rho0))),
        linf_o=float(np.max(np.abs(rho0))),
        tv_o=float(tv_o),
        tv_start=utils.total_variation(extended),
        l1_a=left['l1'], l1_b=right['l1'],
        linf_a=left['linf'], linf_b=right['linf'],
        tv_a=left['tv'], tv_b=right['tv'],
        jump_a=left['jump'], jump_b=right['jump'],
        estimated=any(d.estimated for d in declared.values()),
    )


@dataclass(frozen=True, eq=False)
class DataDistances:
    l1_o: float
    l1_a: np.ndarray
    l1_b: np.ndarray


def data_distances(rho, sigma, mesh):
    """
    Distancias L1 entre dos juegos de datos proyectados sobre la misma
    malla: inicial en ``]a, b[`` y trazas en ``[0, t^n]``.
    """

    def cumulative(u, v):
        diff = np.abs(np.asarray(u[:mesh.NT], dtype=float) - np.asarray(v[:mesh.NT], dtype=float))
        return mesh.dt * np.concatenate(([0.0], np.cumsum(diff)))

    return DataDistances(
        l1_o=float(mesh.dx * np.sum(np.abs(rho.rho0 - sigma.rho0))),
        l1_a=cumulative(rho.traces.left, sigma.traces.left),
        l1_b=cumulative(rho.traces.right, sigma.traces.right),
    )


def kernel_constants(kn):
    """
    Retorna ``(𝓛, 𝓦)`` a partir de las normas del núcleo.
    """

    if not kn.k_omega > 0:
        raise NonPositiveWindow(u'K_omega = %s no es positivo' % kn.k_omega)

    K = kn.k_omega
    cal_L = kn.sup_w1 / K + kn.sup_w * kn.l1_w1 / K ** 2
    cal_W = (2.0 * kn.sup_w2 / K + kn.sup_w * kn.l1_w2 / K ** 2
             + 2.0 * kn.sup_w * kn.l1_w1 ** 2 / K ** 3
             + 2.0 * kn.sup_w1 * kn.l1_w1 / K ** 2)
    return cal_L, cal_W


def _require(fb):
    for name in ('L', 'C', 'sup_d_rhox', 'sup_d_rhoR'):
        if getattr(fb, name) is None:
            raise MissingNorm(u'Falta %s en las cotas del flujo' % name)


def growth(rate, t):
    """
    (e^{rate t} - 1)/rate, con límite t cuando rate se anula.
    """

    x = rate * t
    safe = np.where(x > 0.0, x, 1.0)
    with np.errstate(over='ignore', invalid='ignore'):
        return np.where(x > 0.0, np.expm1(x) / safe, 1.0) * t


def _amplify(exponent, value):
    # e^{exponent} value, nulo cuando value se anula aunque la exponencial desborde
    with np.errstate(over='ignore', invalid='ignore'):
        return np.where(value > 0.0, np.exp(exponent) * value, 0.0)


def bv_chain(c1, t, fb, cal_L, cal_W, maxdata, linf_a, tv_sum):
    """
    Constantes de la estimación BV en espacio tomando *c1* como cota L1:
    K1..K4, C2, la cota L∞ y Cx.
    """

    C = fb.C
    K1 = fb.sup_d_rhox + cal_L * c1 * fb.sup_d_rhoR
    K3 = C * c1 * (cal_L ** 2 * c1 + 0.5 * cal_W)
    K2 = C * c1 * (1.0 + 2.0 * cal_L * c1 + 2.0 * K3)
    C2 = C * (1.0 + cal_L * c1)
    with np.errstate(over='ignore', invalid='ignore'):
        linf_bound = np.exp(C2 * t) * maxdata
        K4 = K2 + 1.5 * C2 * linf_bound + (K3 + 0.5 * C2) * linf_a
        Cx = _amplify(K1 * t, tv_sum) + K4 * growth(K1, t)
    return dict(K1=K1, K2=K2, K3=K3, K4=K4, C2=C2, linf_bound=linf_bound, Cx=Cx)


@dataclass(frozen=True, eq=False)
class ConstantsReport:
    """
    Curvas de las constantes a priori tabuladas sobre ``t``.
    """

    t: np.ndarray
    dt: float
    alpha: float
    L: float
    C: float
    cal_L: float
    cal_W: float
    C1: np.ndarray
    C2: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    K3: np.ndarray
    K4: np.ndarray
    Cx: np.ndarray
    Ct: np.ndarray
    Ct_theorem: np.ndarray
    Cxt: np.ndarray
    linf_bound: np.ndarray
    timediff_bound: np.ndarray
    R1: np.ndarray
    Rinf: np.ndarray
    J: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    T2_C1: np.ndarray
    tv_bound: np.ndarray
    tv_a: np.ndarray
    tv_b: np.ndarray
    estimated: bool = False

    def time_lipschitz(self, n, window):
        """
        Cota de ‖ρ(t^n) - ρ(t^n - τ)‖_1 con τ = window·Δt.
        """

        tau = window * self.dt
        boundary = (self.tv_a[n] - self.tv_a[n - window]) + (self.tv_b[n] - self.tv_b[n - window])
        return float(tau * (self.Ct_theorem[n] + 3.0 * self.L * boundary))

    def box_excess(self, box):
        """
        Cotas en el tiempo final que salen de la región de validez *box*:
        Rinf para ρ y min(J, Rinf) para R. Retorna ``{'rho': cota, 'R': cota}``
        solo con las componentes excedidas.
        """

        rinf = float(self.Rinf[-1])
        bounds = {'rho': rinf, 'R': min(float(self.J[-1]), rinf)}
        return dict((key, value) for key, value in bounds.items()
                    if not value <= getattr(box, key)[1])

    def as_dict(self):
        result = dict((f.name, getattr(self, f.name)) for f in fields(self))
        result['metadata'] = {
            'estimated': self.estimated,
            'Ct_theorem': 'alpha = L',
            'T2_C1': 'K2, K3 with C1 instead of R1',
            'J': 'sup(w) / K_w * R1',
        }
        return result


def apriori_constants(kn, fb, dn, alpha, t_grid=None):
    """
    Calcula las constantes a priori en el orden en que se componen:
    𝓛 y 𝓦 del núcleo, C1 de los datos y α, luego C2, K1..K4, Cx, Ct y
    Cxt; las constantes de existencia repiten la cadena con 𝓡₁ en lugar
    de C1.
    """

    _require(fb)
    cal_L, cal_W = kernel_constants(kn)
    L, C = fb.L, fb.C
    t = dn.times
    linf_a, linf_b = dn.linf_a, dn.linf_b
    maxdata = dn.maxdata

    C1 = dn.l1_o + alpha * (dn.l1_a + dn.l1_b)
    scheme = bv_chain(C1, t, fb, cal_L, cal_W, maxdata, linf_a,
                      dn.tv_start + dn.tv_a + dn.tv_b)
    Cx = scheme['Cx']

    source = C * C1 * (1.0 + cal_L * C1) + 0.5 * C * (linf_b + cal_L * C1 * linf_a)
    Ct = (alpha + L) * Cx + source
    Cxt = (t * (1.0 + alpha + L) * Cx + t * source + dn.dx * (dn.tv_a + dn.tv_b))

    timediff_bound = np.zeros_like(t)
    timediff_bound[1:] = dn.dt * Ct[:-1] + dn.dx * (dn.jump_a[1:] + dn.jump_b[1:])

    R1 = dn.l1_o + L * (dn.l1_a + dn.l1_b)
    theorem = bv_chain(R1, t, fb, cal_L, cal_W, maxdata, linf_a, dn.tv_data)
    Rinf = theorem['linf_bound']
    J = kn.sup_w / kn.k_omega * R1
    tv_bound = theorem['Cx']

    with np.errstate(over='ignore', invalid='ignore'):
        T2_C1 = (scheme['K2'] + 1.5 * C * (1.0 + cal_L * R1) * Rinf
                 + (scheme['K3'] + 0.5 * C * (1.0 + cal_L * R1)) * linf_a)
        Ct_theorem = (2.0 * L * tv_bound + C * R1 * (1.0 + cal_L * R1)
                      + 0.5 * C * (linf_b + cal_L * R1 * linf_a))

    curves = dict(
        C1=C1, C2=scheme['C2'], K1=scheme['K1'], K2=scheme['K2'], K3=scheme['K3'],
        K4=scheme['K4'], Cx=Cx, Ct=Ct, Ct_theorem=Ct_theorem, Cxt=Cxt,
        linf_bound=scheme['linf_bound'], timediff_bound=timediff_bound, R1=R1,
        Rinf=Rinf, J=J, T1=theorem['K1'], T2=theorem['K4'], T2_C1=T2_C1, tv_bound=tv_bound,
        tv_a=dn.tv_a, tv_b=dn.tv_b,
    )
    curves = dict((k, np.broadcast_to(np.asarray(v, dtype=float), t.shape).copy())
                  for k, v in curves.items())

    if t_grid is not None:
        index = _sample_index(t, t_grid)
        curves = dict((k, v[index]) for k, v in curves.items())
        t = np.asarray(t_grid, dtype=float)

    return ConstantsReport(t=t, dt=dn.dt, alpha=alpha, L=L, C=C, cal_L=cal_L, cal_W=cal_W,
                           estimated=dn.estimated, **curves)


def _sample_index(times, t_grid):
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) < 0):
        raise ConfigSemantic([('t_grid', u'La grilla de tiempos debe estar ordenada')])
    index = np.searchsorted(times, t_grid * (1.0 + 1e-12) + 1e-15, side='right') - 1
    return np.clip(index, 0, len(times) - 1)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """
    Cadena de constantes de la estimación de dependencia Lipschitz
    respecto de los datos.
    """

    t: np.ndarray
    J: np.ndarray
    C3: np.ndarray
    C4_bound: np.ndarray
    C5: np.ndarray
    Pinf: np.ndarray
    hatK: np.ndarray
    hatK_printed: np.ndarray
    U: np.ndarray
    R1: np.ndarray
    S1: np.ndarray
    Sinf: np.ndarray
    T1_sigma: np.ndarray
    T2_sigma: np.ndarray
    T3: np.ndarray
    T4: np.ndarray
    A: np.ndarray
    B: np.ndarray
    final_bound: np.ndarray

    def at(self, n):
        return dict((f.name, float(getattr(self, f.name)[n])) for f in fields(self))

    def as_dict(self):
        result = dict((f.name, getattr(self, f.name)) for f in fields(self))
        result['metadata'] = {
            'T4_first_branch': 'hatK * exp(C5 t) * t',
            'hatK': 'last term uses C5; hatK_printed keeps the C3 term',
        }
        return result


def stability_constants(kn, fb, dn_rho, dn_sigma, distances, t_grid=None):
    """
    Calcula A(t), B(t) y la cota final A(1 + B t e^{B t}) para dos
    juegos de datos ρ y σ sobre la misma malla.
    """

    _require(fb)
    cal_L, cal_W = kernel_constants(kn)
    L, C = fb.L, fb.C
    t = dn_rho.times
    length = dn_rho.length
    ratio = kn.sup_w / kn.k_omega

    R1 = dn_rho.l1_o + L * (dn_rho.l1_a + dn_rho.l1_b)
    S1 = dn_sigma.l1_o + L * (dn_sigma.l1_a + dn_sigma.l1_b)
    max_sigma = dn_sigma.maxdata

    J = ratio * np.maximum(R1, S1)
    C5 = fb.sup_d_rhox + fb.sup_d_rhoR * cal_L * R1
    C3 = np.zeros_like(t)

    with np.errstate(over='ignore', invalid='ignore'):
        Pinf = np.exp(C5 * t) * max_sigma
        hatK_printed = 2.0 * length * C * Pinf * (1.0 + R1 * (2.0 * cal_L + cal_L ** 2 * R1 + cal_W))
        hatK = hatK_printed + 0.5 * (3.0 * Pinf + dn_sigma.linf_a) * C5

        Sinf = np.exp(t * C * (1.0 + cal_L * S1)) * max_sigma
        U = max_sigma * np.exp(t * C * (1.0 + cal_L * S1) + t * C5)

        sigma = bv_chain(S1, t, fb, cal_L, cal_W, max_sigma, dn_sigma.linf_a, dn_sigma.tv_data)
        T1_sigma, T2_sigma = sigma['K1'], sigma['K4']

        T3 = fb.sup_d_rhox + cal_L * np.minimum(R1, S1) * fb.sup_d_rhoR
        T4 = (_amplify(t * T3, dn_sigma.tv_data)
              + np.minimum(hatK * np.exp(C5 * t) * t, T2_sigma * growth(T1_sigma, t)))

        A = distances.l1_o + L * (distances.l1_a + distances.l1_b)
        B = (length * C * U * (ratio * (1.0 + cal_L * R1) + cal_L)
             + 4.0 * C * U * ratio + fb.sup_d_rhoR * ratio * T4)
        final_bound = np.where(A > 0.0, A * (1.0 + B * t * np.exp(B * t)), 0.0)

    curves = dict(J=J, C3=C3, C4_bound=C5, C5=C5, Pinf=Pinf, hatK=hatK,
                  hatK_printed=hatK_printed, U=U, R1=R1, S1=S1, Sinf=Sinf,
                  T1_sigma=T1_sigma, T2_sigma=T2_sigma, T3=T3, T4=T4, A=A, B=B,
                  final_bound=final_bound)
    curves = dict((k, np.broadcast_to(np.asarray(v, dtype=float), t.shape).copy())
                  for k, v in curves.items())

    if t_grid is not None:
        index = _sample_index(t, t_grid)
        curves = dict((k, v[index]) for k, v in curves.items())
        t = np.asarray(t_grid, dtype=float)

    return StabilityReport(t=t, **curves)
