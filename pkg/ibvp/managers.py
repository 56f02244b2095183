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
import os
from concurrent.futures import ThreadPoolExecutor

from ibvp.errors import ConfigSemantic


THREADS_ENV = 'SOLVER_THREADS'


def threads_from_env(environ=None):
    """
    Número de hilos de ``SOLVER_THREADS``; por defecto los procesadores
    disponibles.
    """

    environ = os.environ if environ is None else environ
    value = environ.get(THREADS_ENV)
    if value is None or value == '':
        return os.cpu_count() or 1

    try:
        threads = int(value)
    except ValueError:
        threads = 0

    if threads < 1:
        raise ConfigSemantic([(THREADS_ENV, u'Debe ser un entero mayor o igual que 1: %r' % value)])
    return threads


class JobManager(object):
    """
    Manejador de trabajos independientes (niveles de una malla, pares de
    soluciones).
    """

    def __init__(self, threads=None):
        self.threads = threads_from_env() if threads is None else threads

    def results_dict(self, jobs):
        """
        Ejecuta los trabajos ``{clave: callable}`` y retorna un diccionario
        donde las claves son las mismas y los valores sus resultados, en el
        orden de las claves. El primer error encontrado se propaga.
        """

        keys = sorted(jobs)
        logging.info(u'Ejecutando %d trabajos con %d hilos' % (len(keys), self.threads))

        if self.threads == 1 or len(keys) < 2:
            return dict((key, jobs[key]()) for key in keys)

        results_dict = {}
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            futures = dict((key, executor.submit(jobs[key])) for key in keys)
            for key in keys:
                results_dict[key] = futures[key].result()

        return results_dict
