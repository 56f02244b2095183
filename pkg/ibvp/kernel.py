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
from typing import Callable, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import optimize

from ibvp import utils
from ibvp.errors import (DegenerateSupport, InvalidKernel, InvalidMesh,
                         LengthMismatch, NonPositiveWindow, ConfigSemantic)


MIDPOINT = 'midpoint'
CELL_AVERAGE = 'cell_average'
MODES = (MIDPOINT, CELL_AVERAGE)

#: nodos de Gauss-Legendre por celda en el modo de promedio por celda
CELL_AVERAGE_POINTS = 16


@dataclass(frozen=True)
class KernelSpec:
    """
    Núcleo de convolución ω con sus dos primeras derivadas.

    Todas las funciones aceptan arreglos y valen cero fuera de
    ``support_interval``.
    """

    name: str
    evaluate: Callable
    derivative1: Callable
    derivative2: Callable
    support_interval: Tuple[float, float]

    @property
    def support_radius(self):
        lo, hi = self.support_interval
        return max(abs(lo), abs(hi))

    @property
    def support_length(self):
        lo, hi = self.support_interval
        return hi - lo


def triweight(h):
    """
    Núcleo simétrico ``35/(32h) (1 - (y/h)^2)^3`` sobre ``[-h, h]``.
    """

    if not h > 0:
        raise DegenerateSupport(u'El radio del núcleo debe ser positivo: %s' % h)

    def inside(y):
        return np.abs(y) < h

    def evaluate(y):
        y = np.asarray(y, dtype=float)
        u = y / h
        return np.where(inside(y), 35.0 / (32.0 * h) * (1.0 - u ** 2) ** 3, 0.0)

    def derivative1(y):
        y = np.asarray(y, dtype=float)
        u = y / h
        value = -105.0 / (16.0 * h ** 2) * u * (1.0 - u ** 2) ** 2
        return np.where(inside(y), value, 0.0)

    def derivative2(y):
        y = np.asarray(y, dtype=float)
        u = y / h
        value = -105.0 / (16.0 * h ** 3) * (1.0 - u ** 2) * (1.0 - 5.0 * u ** 2)
        return np.where(inside(y), value, 0.0)

    return KernelSpec('triweight', evaluate, derivative1, derivative2, (-h, h))


def lookahead(h, lag=0.0):
    """
    Núcleo asimétrico ``c (u (1 - u))^3`` con ``u = (y + lag)/h`` y
    ``c = 140/h``; mira hacia adelante sobre ``[-lag, h - lag]``.

    Con ``lag = 0`` el soporte es ``[0, h]`` y la ventana en el extremo
    derecho del dominio es nula; un ``lag`` positivo la hace utilizable
    sobre un intervalo acotado.
    """

    if not h > 0:
        raise DegenerateSupport(u'El largo del núcleo debe ser positivo: %s' % h)
    if not 0 <= lag < h:
        raise InvalidKernel(u'El desfase debe estar en [0, h): %s' % lag)

    c = 140.0 / h

    def unit(y):
        u = (np.asarray(y, dtype=float) + lag) / h
        return u, (u > 0.0) & (u < 1.0)

    def evaluate(y):
        u, inside = unit(y)
        return np.where(inside, c * u ** 3 * (1.0 - u) ** 3, 0.0)

    def derivative1(y):
        u, inside = unit(y)
        value = 3.0 * u ** 2 * (1.0 - u) ** 2 * (1.0 - 2.0 * u)
        return np.where(inside, c * value / h, 0.0)

    def derivative2(y):
        u, inside = unit(y)
        value = 6.0 * u * (1.0 - u) * (1.0 - 5.0 * u + 5.0 * u ** 2)
        return np.where(inside, c * value / h ** 2, 0.0)

    return KernelSpec('lookahead', evaluate, derivative1, derivative2, (-lag, h - lag))


KERNELS = {
    'triweight': triweight,
    'lookahead': lookahead,
}


def build_kernel(config):
    """
    Construye el núcleo descrito por la sección ``kernel`` de la
    configuración.
    """

    params = dict((k, v) for k, v in config.items() if k not in ('name', 'discretization'))
    return KERNELS[config['name']](**params)


def kernel_audit(kernel, panels=4096, tol=1e-10):
    """
    Verifica que la masa del núcleo sea 1 y que las derivadas declaradas
    coincidan con diferencias centradas de ``evaluate``.
    """

    lo, hi = kernel.support_interval
    if not hi > lo:
        raise DegenerateSupport(u'Soporte de largo nulo: %s' % (kernel.support_interval,))

    mass = float(utils.simpson(kernel.evaluate, lo, hi, panels)[0])
    if abs(mass - 1.0) > tol:
        raise InvalidKernel(u'La masa del núcleo %s es %.17g, no 1' % (kernel.name, mass))

    step = 1e-4 * (hi - lo)
    y = np.linspace(lo, hi, 257)[1:-1]
    for low, high, name in ((kernel.evaluate, kernel.derivative1, 'derivative1'),
                            (kernel.derivative1, kernel.derivative2, 'derivative2')):
        fd = (low(y + step) - low(y - step)) / (2.0 * step)
        exact = high(y)
        scale = 1.0 + np.max(np.abs(exact))
        if np.max(np.abs(fd - exact)) > 1e-5 * scale:
            raise InvalidKernel(u'%s del núcleo %s no coincide con diferencias finitas'
                                % (name, kernel.name))

    return mass


@dataclass(frozen=True)
class KernelNorms:
    sup_w: float
    sup_w1: float
    sup_w2: float
    l1_w1: float
    l1_w2: float
    k_omega: float


@dataclass(frozen=True, eq=False)
class DiscreteKernel:
    """
    Tabla de pesos ω^m para los desfases ``m = k - j`` con solapamiento no
    nulo y las masas de ventana W_{j+1/2}, ``j = 0..N``.
    """

    weights: np.ndarray
    offsets: np.ndarray
    interface_mass: np.ndarray
    k_omega_discrete: float
    mode: str
    dx: float
    N: int

    def weight(self, m):
        """
        Retorna ω^m; cero para los desfases fuera de la tabla.
        """

        index = m - self.offsets[0]
        if 0 <= index < len(self.weights):
            return float(self.weights[index])
        return 0.0

    @property
    def nonnegative(self):
        return bool(np.all(self.weights >= 0.0))


def _tabulate(kernel, dx, offsets, mode):
    if mode == MIDPOINT:
        return kernel.evaluate((offsets - 0.5) * dx)

    nodes, weights = utils.gauss_nodes((offsets - 1) * dx, offsets * dx, 1,
                                       points=CELL_AVERAGE_POINTS)
    return np.sum(kernel.evaluate(nodes) * weights, axis=1) / dx


def _correlate(weights, first_offset, N, cells):
    # S_j = sum_k w[k - j] cells[k], j = 0..N, con cells nulo fuera de 1..N.
    M = len(weights)
    extended = np.zeros(N + M)
    k = np.arange(1, N + 1)
    p = k - first_offset
    keep = (p >= 0) & (p < N + M)
    extended[p[keep]] = cells[keep]
    return sliding_window_view(extended, M) @ weights


def build_discrete_kernel(kernel, mesh, mode=MIDPOINT):
    """
    Tabula ω^m para todo desfase ``m = k - j`` con ``j`` en ``0..N`` y ``k``
    en ``1..N`` y calcula las masas W_{j+1/2} = Δx Σ_k ω^{k-j}.

    En modo ``midpoint`` ω^m = ω((m - 1/2)Δx); en modo ``cell_average``
    es el promedio de ω sobre ``[(m-1)Δx, mΔx]``.
    """

    if mode not in MODES:
        raise InvalidKernel(u'Modo de discretización desconocido: %s' % mode)
    if mesh.N < 1:
        raise InvalidMesh(u'Se necesita al menos una celda: N = %s' % mesh.N)

    N, dx = mesh.N, mesh.dx
    offsets = np.arange(1 - N, N + 1)
    weights = _tabulate(kernel, dx, offsets, mode)

    nonzero = np.flatnonzero(weights)
    if len(nonzero) == 0:
        raise NonPositiveWindow(u'El núcleo %s no cubre ninguna celda' % kernel.name)

    first, last = nonzero[0], nonzero[-1]
    weights = np.ascontiguousarray(weights[first:last + 1])
    offsets = offsets[first:last + 1]

    interface_mass = dx * _correlate(weights, int(offsets[0]), N, np.ones(N))
    k_omega = float(np.min(interface_mass))

    if not k_omega > 0:
        j = int(np.argmin(interface_mass))
        raise NonPositiveWindow(u'W_{j+1/2} = %.17g <= 0 en la interfaz j = %d'
                                % (interface_mass[j], j))

    logging.info(u'Núcleo %s (%s): %d pesos, K_omega discreto %.6g'
                 % (kernel.name, mode, len(weights), k_omega))

    return DiscreteKernel(weights, offsets, interface_mass, k_omega, mode, dx, N)


def nonlocal_average(dk, cells):
    """
    Retorna R_{j+1/2} = (Δx / W_{j+1/2}) Σ_k ω^{k-j} ρ_k, ``j = 0..N``.
    """

    cells = np.asarray(cells, dtype=float)
    if cells.shape != (dk.N,):
        raise LengthMismatch(u'Se esperaban %d celdas, se recibieron %s'
                             % (dk.N, cells.shape))

    return dk.dx * _correlate(dk.weights, int(dk.offsets[0]), dk.N, cells) / dk.interface_mass


def _sup_norm(func, lo, hi, samples):
    y = np.linspace(lo, hi, samples)
    values = np.abs(func(y))
    i = int(np.argmax(values))
    best = float(values[i])

    left, right = y[max(i - 1, 0)], y[min(i + 1, samples - 1)]
    if right > left:
        result = optimize.minimize_scalar(lambda s: -abs(float(func(s))),
                                          bounds=(left, right), method='bounded',
                                          options={'xatol': 1e-12 * (hi - lo)})
        best = max(best, -float(result.fun))

    return best


def _l1_norm(func, lo, hi, samples, panels):
    y = np.linspace(lo, hi, samples)
    values = func(y)

    # Cortes en los ceros: |g| se integra por tramos de signo constante.
    cuts = [lo, hi]
    cuts.extend(y[1:-1][values[1:-1] == 0.0])
    for i in np.flatnonzero(values[:-1] * values[1:] < 0.0):
        cuts.append(optimize.brentq(lambda s: float(func(s)), y[i], y[i + 1], xtol=1e-14))

    cuts = np.unique(cuts)
    pieces = utils.simpson(func, cuts[:-1], cuts[1:], panels)
    return float(np.sum(np.abs(pieces)))


def window_mass(kernel, a, b, x, panels):
    """
    Retorna W(x) = ∫_a^b ω(y - x) dy para cada posición de *x*.
    """

    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = kernel.support_interval
    start = np.maximum(a, x + lo)
    stop = np.maximum(np.minimum(b, x + hi), start)

    def integrand(nodes):
        return kernel.evaluate(nodes - x[:, None])

    return utils.simpson(integrand, start, stop, panels)


def kernel_norms(kernel, mesh, quadrature_points=1024):
    """
    Calcula las normas de ω, ω' y ω'' que usan las constantes a priori y la
    cota inferior K_ω de W(x) sobre ``[a, b]``.
    """

    if quadrature_points < 64:
        raise ConfigSemantic([('quadrature_points',
                               u'Se necesitan al menos 64 puntos: %s' % quadrature_points)])

    lo, hi = kernel.support_interval
    if not hi > lo:
        raise DegenerateSupport(u'Soporte de largo nulo: %s' % (kernel.support_interval,))

    samples = 8 * quadrature_points + 1
    panels = max(1024, quadrature_points)

    x = np.linspace(mesh.a, mesh.b, max(1024, quadrature_points) + 1)
    k_omega = float(np.min(window_mass(kernel, mesh.a, mesh.b, x, panels)))
    if not k_omega > 0:
        raise NonPositiveWindow(u'K_omega = %.17g: la ventana del núcleo %s se anula en [a, b]'
                                % (k_omega, kernel.name))

    return KernelNorms(
        sup_w=_sup_norm(kernel.evaluate, lo, hi, samples),
        sup_w1=_sup_norm(kernel.derivative1, lo, hi, samples),
        sup_w2=_sup_norm(kernel.derivative2, lo, hi, samples),
        l1_w1=_l1_norm(kernel.derivative1, lo, hi, samples, panels),
        l1_w2=_l1_norm(kernel.derivative2, lo, hi, samples, panels),
        k_omega=k_omega,
    )
