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


from unittest import mock

import numpy as np
from numpy import testing

from ibvp.diagnostics import Violation
from ibvp.errors import BoundViolation, NonFiniteState
from ibvp.flux import LinearAdvection, NonlocalLWR, ZeroFlux
from ibvp.grid import BoundaryTraces
from ibvp.kernel import build_discrete_kernel, triweight
from ibvp.solver import advance, numerical_flux, prepare, solve, step
from ibvp.tests import TestBase, reference_run


class TestScheme(TestBase):

    def setUp(self):
        TestBase.setUp(self)
        self.grid = self.mesh(3, 0.2, alpha=1.0, b=3.0, NT=2)
        self.dk = build_discrete_kernel(triweight(1.0), self.grid)
        self.traces = BoundaryTraces(np.zeros(4), np.zeros(4))

    def test_numerical_flux(self):
        """
        El sistema debe reducir el flujo numérico a f en estados iguales, a
        upwind para transporte con α = 1 y a difusión pura para f = 0.
        """

        model = NonlocalLWR(1.0, 1.0)
        F = numerical_flux(model, 0.0, 0.5, 0.3, 0.3, 0.4, 2.0)
        assert abs(F - model.value(0.0, 0.5, 0.3, 0.4)) < 1e-16

        u, v = np.array([0.2, 0.9]), np.array([0.7, 0.1])
        testing.assert_allclose(numerical_flux(LinearAdvection(1.0), 0.0, 0.5, u, v, 0.0, 1.0), u,
                                atol=1e-15)
        testing.assert_allclose(numerical_flux(ZeroFlux(), 0.0, 0.5, u, v, 0.0, 1.0),
                                -(v - u) / 2.0, atol=1e-15)

    def test_step_advection(self):
        """
        El sistema debe transportar una celda como upwind.
        """

        new = step(self.state([1.0, 0.0, 0.0]), self.dk, LinearAdvection(1.0), self.grid,
                   self.traces)
        testing.assert_allclose(new.cells, [0.8, 0.2, 0.0], atol=1e-15)
        assert new.n == 1 and abs(new.t - self.grid.dt) < 1e-16

    def test_step_diffusion(self):
        """
        El sistema debe difundir una celda con f = 0.
        """

        new = step(self.state([0.0, 1.0, 0.0]), self.dk, ZeroFlux(), self.grid, self.traces)
        testing.assert_allclose(new.cells, [0.1, 0.8, 0.1], atol=1e-15)

    def test_step_constant(self):
        """
        El sistema debe conservar un estado constante con trazas iguales.
        """

        traces = BoundaryTraces(np.full(4, 0.4), np.full(4, 0.4))
        state = self.state([0.4, 0.4, 0.4], 0.4, 0.4)
        new = step(state, self.dk, LinearAdvection(0.5), self.grid, traces)
        assert np.all(new.cells == 0.4)

    def test_step_returns_fluxes(self):
        """
        El sistema debe retornar los N + 1 flujos de interfaz del paso.
        """

        new, F = advance(self.state([1.0, 0.0, 0.0]), self.dk, LinearAdvection(1.0),
                         self.grid, self.traces)
        testing.assert_allclose(F, [0.0, 1.0, 0.0, 0.0], atol=1e-16)

    def test_non_finite_state(self):
        """
        El sistema debe detectar un estado no finito con el índice del paso.
        """

        state = self.state([1e308, -1e308, 0.0], n=1)
        with self.assertRaises(NonFiniteState) as context:
            advance(state, self.dk, ZeroFlux(), self.grid, self.traces)
        assert context.exception.step == 1
        assert '(paso 1)' in str(context.exception)


class TestSolve(TestBase):

    fixtures = ['reference', 'smooth']

    def test_prepare(self):
        """
        El sistema debe construir malla, núcleo y constantes a partir de la
        configuración de referencia.
        """

        problem = prepare(self.config())
        assert problem.bounds.L == 1.0
        assert problem.mesh.alpha == 1.0
        assert abs(problem.mesh.NT * problem.mesh.dt - 0.5) < 1e-14
        assert len(problem.projected.rho0) == 200
        assert len(problem.constants.C1) == problem.mesh.NT + 1

    def test_zero_data(self):
        """
        El sistema debe mantener nula la solución con datos nulos.
        """

        zero = {'kind': 'constant', 'value': 0.0}
        config = self.config(N=50, data={'initial': zero, 'left': zero, 'right': zero})
        trajectory = solve(config)
        for state in trajectory.states:
            assert np.all(state.cells == 0.0)
        assert trajectory.violations == []

    def test_classical_scheme(self):
        """
        El sistema debe coincidir con un Lax-Friedrichs clásico cuando el
        flujo no depende de R.
        """

        config = self.config('smooth', N=64, T=10.0 / 64.0, **{'lambda': 0.1,
                                                              'flux__params__c': 0.7})
        trajectory = solve(config)
        mesh = trajectory.mesh
        assert mesh.NT == 100 and len(trajectory.states) == 101

        projected = trajectory.problem.projected
        rho = projected.rho0.copy()
        for n in range(mesh.NT):
            u = np.concatenate(([projected.traces.left[n]], rho, [projected.traces.right[n]]))
            fluxes = [0.5 * (0.7 * u[j] + 0.7 * u[j + 1] - mesh.alpha * (u[j + 1] - u[j]))
                      for j in range(mesh.N + 1)]
            rho = np.array([rho[j] - mesh.lam * (fluxes[j + 1] - fluxes[j])
                            for j in range(mesh.N)])
            testing.assert_allclose(trajectory.states[n + 1].cells, rho, rtol=0, atol=1e-14)

    def test_positivity(self):
        """
        El sistema debe preservar la positividad en la corrida de
        referencia.
        """

        trajectory = reference_run()
        assert min(r.min_cell for r in trajectory.records) >= -1e-12

    def test_mass_balance(self):
        """
        El sistema debe cerrar el balance de masa con los flujos de borde en
        cada paso.
        """

        trajectory = reference_run()
        for record in trajectory.records[1:]:
            assert abs(record.mass_residual) <= 1e-13 * max(1.0, record.mass)

        F = trajectory.boundary_fluxes
        assert F.shape == (trajectory.mesh.NT, 2)

    def test_bounds_hold(self):
        """
        El sistema debe cumplir las cotas L1, L∞, BV y de continuidad en el
        tiempo en cada paso.
        """

        trajectory = reference_run()
        assert trajectory.violations == []
        for record in trajectory.records:
            assert record.margin_l1 >= -1e-10
            assert not record.margin_linf < -1e-10
            assert not record.margin_tv < -1e-8
        for record in trajectory.records[1:]:
            assert not record.margin_timediff < -1e-8
            assert not record.margin_xt < -1e-8

    def test_entropy(self):
        """
        El sistema debe cumplir las desigualdades de entropía discretas en
        todas las celdas, pasos y niveles k con N = 128.
        """

        trajectory = reference_run(N=128, entropy_every=1)
        records = trajectory.records[1:]
        assert len(records) == trajectory.mesh.NT
        assert max(r.entropy_plus_max for r in records) <= 1e-12
        assert max(r.entropy_minus_max for r in records) <= 1e-12
        assert [v for v in trajectory.violations if v.name.startswith('entropy')] == []

    def test_stride(self):
        """
        El sistema debe guardar un estado cada stride pasos y el final.
        """

        trajectory = solve(self.config(N=40, stride=7), entropy_every=0)
        NT = trajectory.mesh.NT
        steps = [state.n for state in trajectory.states]
        assert steps[0] == 0 and steps[-1] == NT
        assert all(n % 7 == 0 for n in steps[:-1])
        assert len(trajectory.records) == NT + 1

    def test_strict_mode(self):
        """
        El sistema debe abortar en modo estricto ante la primera cota
        violada.
        """

        def violate(record, constants, mode='monitor'):
            return record, [Violation('linf', record.step, 1.0, 0.5, -0.5)]

        with mock.patch('ibvp.diagnostics.compare_bounds', side_effect=violate):
            with self.assertRaises(BoundViolation) as context:
                solve(self.config(N=20), mode='strict')

        assert context.exception.step == 0
        assert context.exception.exit_code == 2

        with mock.patch('ibvp.diagnostics.compare_bounds', side_effect=violate):
            trajectory = solve(self.config(N=20), mode='monitor', entropy_every=0)
        assert len(trajectory.violations) == trajectory.mesh.NT + 1
