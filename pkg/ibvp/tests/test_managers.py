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


import os
import threading
from unittest import mock

from ibvp.errors import ConfigSemantic, NonFiniteState
from ibvp.managers import THREADS_ENV, JobManager, threads_from_env
from ibvp.tests import TestBase


class TestThreads(TestBase):

    def test_default(self):
        """
        El sistema debe usar los procesadores disponibles sin SOLVER_THREADS.
        """

        assert threads_from_env({}) == (os.cpu_count() or 1)
        assert threads_from_env({THREADS_ENV: ''}) == (os.cpu_count() or 1)

    def test_value(self):
        """
        El sistema debe leer la cantidad de hilos del entorno.
        """

        assert threads_from_env({THREADS_ENV: '3'}) == 3
        with mock.patch.dict(os.environ, {THREADS_ENV: '2'}):
            assert JobManager().threads == 2

    def test_invalid(self):
        """
        El sistema debe rechazar valores no enteros o menores que 1.
        """

        for value in ('0', '-2', 'many', '1.5'):
            with self.assertRaises(ConfigSemantic) as ctx:
                threads_from_env({THREADS_ENV: value})
            assert ctx.exception.fields == [THREADS_ENV]


class TestJobManager(TestBase):

    def jobs(self):
        return {'b': lambda: 2, 'a': lambda: 1, 'c': lambda: 3}

    def test_results_sequential(self):
        """
        El sistema debe retornar los resultados en el orden de las claves.
        """

        results = JobManager(threads=1).results_dict(self.jobs())
        assert list(results) == ['a', 'b', 'c']
        assert results == {'a': 1, 'b': 2, 'c': 3}

    def test_results_threads(self):
        """
        El sistema debe repartir los trabajos entre hilos sin alterar el
        resultado.
        """

        names = set()

        def job(value):
            def run():
                names.add(threading.current_thread().name)
                return value
            return run

        results = JobManager(threads=4).results_dict(dict((i, job(i * i)) for i in range(8)))
        assert list(results) == list(range(8))
        assert results == dict((i, i * i) for i in range(8))
        assert names

    def test_error(self):
        """
        El sistema debe propagar el error de un trabajo.
        """

        def broken():
            raise NonFiniteState(u'desborde', step=3)

        for threads in (1, 2):
            with self.assertRaises(NonFiniteState) as ctx:
                JobManager(threads=threads).results_dict({'ok': lambda: 1, 'bad': broken})
            assert ctx.exception.step == 3
