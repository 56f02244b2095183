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
from dataclasses import dataclass, field, replace
from typing import List

import numpy as np

from ibvp.errors import BoundViolation, IBVPError, NonFiniteState
from ibvp.flux import BoxMonitor, FluxBox, audit_flux, build_flux, evaluate_flux, flux_bounds
from ibvp.grid import ProblemData, build_datum, build_mesh, project
from ibvp.kernel import (build_discrete_kernel, build_kernel, kernel_audit,
                         kernel_norms, nonlocal_average)


@dataclass(frozen=True, eq=False)
class SolverState:
    """
    Estado en el paso *n*: celdas ρ_j^n, fantasmas ρ_0^n = ρ_a^n y
    ρ_{N+1}^n = ρ_b^n, y los promedios no locales R_{j+1/2}^n.
    """

    n: int
    t: float
    cells: np.ndarray
    ghost_left: float
    ghost_right: float
    interface_R: np.ndarray

    def extended(self):
        return np.concatenate(([self.ghost_left], self.cells, [self.ghost_right]))


def numerical_flux(model, t, x_interface, u, v, R, alpha, monitor=None):
    """
    Flujo de Lax-Friedrichs F = ½ [f(t,x,u,R) + f(t,x,v,R) - α (v - u)],
    con el mismo R para ambos lados de la interfaz.
    """

    fu = evaluate_flux(model, t, x_interface, u, R, monitor)
    fv = evaluate_flux(model, t, x_interface, v, R, monitor)
    return 0.5 * (fu + fv - alpha * (v - u))


def interface_fluxes(state, model, mesh, monitor=None):
    ext = state.extended()
    return numerical_flux(model, state.t, mesh.interfaces, ext[:-1], ext[1:],
                          state.interface_R, mesh.alpha, monitor)


def initial_state(projected, dk, mesh):
    cells = np.array(projected.rho0, dtype=float)
    return SolverState(0, 0.0, cells, float(projected.traces.left[0]),
                       float(projected.traces.right[0]), nonlocal_average(dk, cells))


def advance(state, dk, model, mesh, traces, monitor=None):
    """
    Avanza un paso y retorna ``(nuevo_estado, F)`` con los N + 1 flujos de
    interfaz usados.
    """

    F = interface_fluxes(state, model, mesh, monitor)
    cells = state.cells - mesh.lam * (F[1:] - F[:-1])

    if not np.all(np.isfinite(cells)):
        raise NonFiniteState(u'Valores no finitos en las celdas', step=state.n)

    n = state.n + 1
    new = SolverState(n, n * mesh.dt, cells, float(traces.left[n]), float(traces.right[n]),
                      nonlocal_average(dk, cells))
    return new, F


def step(state, dk, model, mesh, traces, monitor=None):
    return advance(state, dk, model, mesh, traces, monitor)[0]


@dataclass(frozen=True, eq=False)
class Problem:
    """
    Todo lo que una ejecución necesita, construido a partir de la
    configuración.
    """

    config: object
    kernel: object
    model: object
    bounds: object
    mesh: object
    dk: object
    kernel_norms: object
    data: object
    projected: object
    data_norms: object
    constants: object


def flux_box(config, T):
    box = config.flux.box
    return FluxBox(t=(0.0, T), x=(config.a, config.b), rho=tuple(box['rho']),
                   R=tuple(box['R']))


def prepare(config, data=None):
    """
    Construye núcleo, flujo, malla, datos proyectados y constantes a priori.
    *data* reemplaza los datos de la configuración cuando se indica.
    """

    from ibvp.bounds import apriori_constants, data_norms

    kernel = build_kernel(config.kernel.as_params())
    kernel_audit(kernel)

    model = build_flux(config.flux.to_dict(), config.a, config.b)
    box = flux_box(config, config.T)
    audit_flux(model, box)
    bounds = flux_bounds(model, box)

    mesh = build_mesh(config.a, config.b, config.N, config.T, config.alpha, bounds,
                      safety=config.cfl_safety, lam=config.lam)
    dk = build_discrete_kernel(kernel, mesh, config.kernel.discretization)
    norms = kernel_norms(kernel, mesh)

    if data is None:
        data = ProblemData(
            build_datum(config.data['initial'], config.a, config.b, config.base_dir),
            build_datum(config.data['left'], 0.0, config.T, config.base_dir),
            build_datum(config.data['right'], 0.0, config.T, config.base_dir),
        )
    projected = project(data, mesh)
    dn = data_norms(projected, mesh)
    constants = apriori_constants(norms, bounds, dn, mesh.alpha)

    for key, value in sorted(constants.box_excess(box).items()):
        logging.warning(u'La cota a priori de %s en T (%.6g) sale de la región de validez '
                        u'[%s, %s]; las cotas del flujo solo valen dentro de ella'
                        % (key, value, getattr(box, key)[0], getattr(box, key)[1]))

    return Problem(config, kernel, model, bounds, mesh, dk, norms, data, projected,
                   dn, constants)


@dataclass(eq=False)
class Trajectory:
    """
    Estados guardados cada ``stride`` pasos (y el final), un registro de
    diagnóstico por paso y los flujos de borde F_{1/2}, F_{N+1/2}.
    """

    problem: Problem
    states: List[SolverState] = field(default_factory=list)
    records: list = field(default_factory=list)
    boundary_fluxes: np.ndarray = None
    violations: list = field(default_factory=list)
    outside_box: int = 0

    @property
    def mesh(self):
        return self.problem.mesh

    @property
    def final(self):
        return self.states[-1]


def _check(record, constants, mode, violations):
    from ibvp.diagnostics import compare_bounds

    record, found = compare_bounds(record, constants, mode)
    violations.extend(found)
    if found and mode == 'strict':
        raise BoundViolation(found, step=record.step)
    return record


def solve(config, mode=None, entropy_every=None, problem=None):
    """
    Ejecuta los N_T pasos del esquema registrando diagnósticos en cada paso.

    En modo ``strict`` la primera cota violada aborta con BoundViolation;
    en modo ``monitor`` se registran los márgenes. Todo error propagado
    lleva el índice del paso.
    """

    from ibvp.diagnostics import (default_k_grid, entropy_due, entropy_residuals,
                                  measure, time_difference)

    if problem is None:
        problem = prepare(config)
    mode = mode or config.mode
    every = config.entropy_every if entropy_every is None else entropy_every

    mesh, dk, model = problem.mesh, problem.dk, problem.model
    traces = problem.projected.traces
    monitor = BoxMonitor(problem.bounds.box)

    state = initial_state(problem.projected, dk, mesh)
    trajectory = Trajectory(problem, boundary_fluxes=np.zeros((mesh.NT, 2)))
    trajectory.states.append(state)
    trajectory.records.append(_check(replace(measure(state, mesh), xt_sum=0.0),
                                     problem.constants, mode, trajectory.violations))

    xt_sum = 0.0
    for n in range(mesh.NT):
        previous = trajectory.records[-1]
        try:
            new, F = advance(state, dk, model, mesh, traces, monitor)
            trajectory.boundary_fluxes[n] = F[0], F[-1]

            record = measure(new, mesh)
            diff = time_difference(state, new, mesh)
            xt_sum += mesh.dt * previous.tv + diff
            record = replace(record, time_diff=diff, xt_sum=xt_sum,
                             mass_residual=record.mass - previous.mass
                             + mesh.dt * (F[-1] - F[0]))

            if entropy_due(n, mesh.N, every):
                k_grid = default_k_grid(state, new, config.k_grid)
                residuals = entropy_residuals(state, new, mesh, dk, model, k_grid)
                record = replace(record, entropy_plus_max=residuals.plus_max,
                                 entropy_minus_max=residuals.minus_max)

            record = _check(record, problem.constants, mode, trajectory.violations)
        except IBVPError as e:
            if e.step is None:
                e.step = n
            logging.error(u'ERROR: %s' % e)
            raise

        trajectory.records.append(record)
        if (n + 1) % config.stride == 0 or n + 1 == mesh.NT:
            trajectory.states.append(new)
        state = new

    trajectory.outside_box = monitor.outside
    logging.info(u'Ejecución terminada: %d pasos, %d violaciones'
                 % (mesh.NT, len(trajectory.violations)))

    return trajectory
