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


import copy
import functools
import json
import os
import unittest

import numpy as np

from ibvp.forms import validate
from ibvp.grid import Mesh
from ibvp.solver import SolverState, solve


FIXTURES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                            'fixtures')


def load_fixture(name):
    with open(os.path.join(FIXTURES_DIR, '%s.json' % name)) as handle:
        return json.load(handle)


def merge(data, overrides):
    """
    Reemplaza claves anidadas de *data*; ``{'flux.params.c': 2}`` toca solo
    ``data['flux']['params']['c']``.
    """

    data = copy.deepcopy(data)
    for path, value in overrides.items():
        target = data
        keys = path.split('.')
        for key in keys[:-1]:
            target = target.setdefault(key, {})
        target[keys[-1]] = value
    return data


class TestBase(unittest.TestCase):
    """
    Utilidades comunes: configuraciones de referencia, mallas armadas a
    mano y estados.
    """

    fixtures = ['reference']

    def setUp(self):
        self.data = dict((name, load_fixture(name)) for name in self.fixtures)

    def config_data(self, name='reference', **overrides):
        data = self.data.get(name) or load_fixture(name)
        return merge(data, dict((k.replace('__', '.'), v) for k, v in overrides.items()))

    def config(self, name='reference', **overrides):
        return validate(self.config_data(name, **overrides), base_dir=FIXTURES_DIR)

    def mesh(self, N, lam, alpha=1.0, a=0.0, b=None, NT=10):
        b = float(N) if b is None else b
        dx = (b - a) / N
        return Mesh(a, b, N, dx, lam * dx, lam, alpha, NT * lam * dx, NT)

    def state(self, cells, ghost_left=0.0, ghost_right=0.0, n=0, t=0.0, R=None):
        cells = np.asarray(cells, dtype=float)
        R = np.zeros(len(cells) + 1) if R is None else np.asarray(R, dtype=float)
        return SolverState(n, t, cells, ghost_left, ghost_right, R)


@functools.lru_cache(maxsize=None)
def reference_run(N=200, entropy_every=None):
    """
    Trayectoria de la configuración de referencia, compartida entre pruebas.
    """

    config = validate(merge(load_fixture('reference'), {'N': N}), base_dir=FIXTURES_DIR)
    return solve(config, entropy_every=entropy_every)
