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


import numpy as np
from numpy import testing

from ibvp.errors import (ConfigSemantic, DegenerateSupport, InvalidKernel,
                         LengthMismatch, NonPositiveWindow)
from ibvp.kernel import (CELL_AVERAGE, KernelSpec, build_discrete_kernel, build_kernel,
                         kernel_audit, kernel_norms, lookahead, nonlocal_average, triweight)
from ibvp.tests import TestBase


class TestKernel(TestBase):

    def setUp(self):
        TestBase.setUp(self)
        self.kernel = triweight(0.2)
        self.unit_mesh = self.mesh(256, 0.1, b=1.0)

    def test_triweight_weight(self):
        """
        El sistema debe tabular ω¹ = ω(Δx/2) en el modo de punto medio.
        """

        mesh = self.mesh(8, 0.1, b=4.0)
        dk = build_discrete_kernel(triweight(1.0), mesh)
        assert abs(dk.weight(1) - 35.0 / 32.0 * (1.0 - 0.25 ** 2) ** 3) < 1e-15
        assert abs(dk.weight(1) - 0.90122) < 1e-5
        assert dk.weight(100) == 0.0
        assert dk.nonnegative

    def test_interface_mass_symmetric(self):
        """
        El sistema debe producir masas de ventana simétricas para un núcleo
        par.
        """

        dk = build_discrete_kernel(self.kernel, self.mesh(50, 0.1, b=1.0))
        testing.assert_allclose(dk.interface_mass, dk.interface_mass[::-1], rtol=1e-13)
        assert dk.k_omega_discrete > 0

    def test_cell_average_interior_mass(self):
        """
        El sistema debe dar W = 1 en las interfaces interiores en el modo de
        promedio por celda.
        """

        mesh = self.mesh(100, 0.1, b=1.0)
        dk = build_discrete_kernel(self.kernel, mesh, CELL_AVERAGE)
        x = mesh.interfaces
        interior = (x >= 0.2 + 1e-9) & (x <= 0.8 - 1e-9)
        testing.assert_allclose(dk.interface_mass[interior], 1.0, atol=1e-10)

    def test_average_of_constant(self):
        """
        El sistema debe reproducir un estado constante y anular el nulo.
        """

        for kernel in (self.kernel, lookahead(0.2, 0.05)):
            dk = build_discrete_kernel(kernel, self.unit_mesh)
            testing.assert_allclose(nonlocal_average(dk, np.full(256, 0.7)), 0.7, rtol=1e-13)
            assert np.all(nonlocal_average(dk, np.zeros(256)) == 0.0)

    def test_average_single_cell(self):
        """
        El sistema debe dar Δx ω^{k0-j}/W_{j+1/2} para una sola celda no
        nula.
        """

        mesh = self.unit_mesh
        dk = build_discrete_kernel(self.kernel, mesh)
        k0 = 100
        cells = np.zeros(mesh.N)
        cells[k0 - 1] = 1.0

        j = np.arange(mesh.N + 1)
        expected = mesh.dx * self.kernel.evaluate((k0 - j - 0.5) * mesh.dx)
        expected = expected / dk.interface_mass
        testing.assert_allclose(nonlocal_average(dk, cells), expected, rtol=0, atol=1e-13)

    def test_average_direct_correlation(self):
        """
        El sistema debe coincidir con la correlación directa O(N²) para
        estados aleatorios.
        """

        mesh = self.unit_mesh
        dk = build_discrete_kernel(self.kernel, mesh)

        j = np.arange(mesh.N + 1)[:, None]
        k = np.arange(1, mesh.N + 1)[None, :]
        matrix = self.kernel.evaluate((k - j - 0.5) * mesh.dx)
        window = matrix.sum(axis=1)

        rng = np.random.default_rng(7)
        for _ in range(100):
            cells = rng.uniform(0.0, 1.0, mesh.N)
            expected = matrix.dot(cells) / window
            testing.assert_allclose(nonlocal_average(dk, cells), expected, rtol=0, atol=1e-13)

    def test_average_length(self):
        """
        El sistema debe rechazar un estado de largo distinto de N.
        """

        dk = build_discrete_kernel(self.kernel, self.unit_mesh)
        with self.assertRaises(LengthMismatch):
            nonlocal_average(dk, np.zeros(10))

    def test_kernel_norms_triweight(self):
        """
        El sistema debe calcular sup ω = 35/32, ‖ω'‖₁ = 2 sup ω y K_ω = 1/2
        en el borde para h = 1.
        """

        norms = kernel_norms(triweight(1.0), self.mesh(8, 0.1, b=4.0))
        assert abs(norms.sup_w - 35.0 / 32.0) < 1e-12
        assert abs(norms.l1_w1 - 2.0 * norms.sup_w) < 1e-8
        assert abs(norms.k_omega - 0.5) < 1e-8
        assert norms.k_omega < 1.0

        # ω'' = -105/16 (1 - y²)(1 - 5y²) alcanza su máximo en y = 0
        assert abs(norms.sup_w2 - 105.0 / 16.0) < 1e-10
        assert norms.l1_w2 > 0

    def test_kernel_norms_quadrature_points(self):
        """
        El sistema debe exigir al menos 64 puntos de cuadratura.
        """

        with self.assertRaises(ConfigSemantic):
            kernel_norms(self.kernel, self.unit_mesh, quadrature_points=32)

    def test_lookahead_without_lag(self):
        """
        El sistema debe rechazar un núcleo cuya ventana se anula en el
        extremo derecho.
        """

        kernel = lookahead(0.2)
        with self.assertRaises(NonPositiveWindow):
            build_discrete_kernel(kernel, self.unit_mesh)
        with self.assertRaises(NonPositiveWindow):
            kernel_norms(kernel, self.unit_mesh)

    def test_lookahead_with_lag(self):
        """
        El sistema debe aceptar un núcleo lookahead con desfase positivo.
        """

        kernel = build_kernel({'name': 'lookahead', 'h': 0.2, 'lag': 0.05})
        lo, hi = kernel.support_interval
        assert lo == -0.05 and abs(hi - 0.15) < 1e-15
        assert abs(kernel.support_length - 0.2) < 1e-15
        assert abs(kernel.support_radius - 0.15) < 1e-15
        assert triweight(0.2).support_radius == 0.2
        assert abs(kernel_audit(kernel) - 1.0) < 1e-10
        assert kernel_norms(kernel, self.unit_mesh).k_omega > 0

    def test_invalid_kernels(self):
        """
        El sistema debe detectar soportes degenerados, masas distintas de 1,
        derivadas inconsistentes y modos desconocidos.
        """

        with self.assertRaises(DegenerateSupport):
            triweight(0.0)
        with self.assertRaises(InvalidKernel):
            lookahead(0.2, 0.3)

        base = triweight(1.0)
        heavy = KernelSpec('heavy', lambda y: 2.0 * base.evaluate(y), base.derivative1,
                           base.derivative2, base.support_interval)
        with self.assertRaises(InvalidKernel):
            kernel_audit(heavy)

        wrong = KernelSpec('wrong', base.evaluate, base.derivative2, base.derivative2,
                           base.support_interval)
        with self.assertRaises(InvalidKernel):
            kernel_audit(wrong)

        assert abs(kernel_audit(base) - 1.0) < 1e-10

        with self.assertRaises(InvalidKernel) as context:
            build_discrete_kernel(self.kernel, self.unit_mesh, 'trapezoid')
        assert context.exception.exit_code == 4
