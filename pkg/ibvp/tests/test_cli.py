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


import io
import json
import os
import shutil
import tempfile
from unittest import mock

import numpy as np

from ibvp import cli, utils
from ibvp.diagnostics import COLUMNS, Violation
from ibvp.errors import ConfigSemantic, NonFiniteState
from ibvp.tests import TestBase


class TestCli(TestBase):

    def setUp(self):
        TestBase.setUp(self)
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def path(self, *names):
        return os.path.join(self.tmp, *names)

    def write_config(self, name='run.json', **overrides):
        params = dict(N=20, T=0.1)
        params.update(overrides)
        data = self.config_data(**params)
        with open(self.path(name), 'w') as handle:
            json.dump(data, handle)
        return self.path(name)

    def run_cli(self, *argv):
        stderr = io.StringIO()
        code = cli.run_cli(list(argv), stderr=stderr)
        return code, stderr.getvalue()

    def read(self, *names):
        with open(self.path(*names), 'rb') as handle:
            return handle.read()

    def read_json(self, name):
        with open(self.path(name)) as handle:
            return json.load(handle)

    def test_solve(self):
        """
        El sistema debe escribir solución, interfaces y diagnósticos, y
        repetir los mismos bytes en una segunda ejecución.
        """

        config = self.write_config()
        outputs = []
        for out in ('first', 'second'):
            code, stderr = self.run_cli('solve', '--config', config, '--out', self.path(out))
            assert code == 0, stderr
            outputs.append(dict((name, self.read(out, name)) for name in
                                ('solution.csv', 'interfaces.csv', 'diagnostics.csv')))

        assert outputs[0] == outputs[1]

        solution = outputs[0]['solution.csv'].decode().splitlines()
        diagnostics = outputs[0]['diagnostics.csv'].decode().splitlines()
        interfaces = outputs[0]['interfaces.csv'].decode().splitlines()
        assert solution[0] == 't,x,rho'
        assert interfaces[0] == 't,x_interface,R'
        assert diagnostics[0] == ','.join(COLUMNS)

        steps = len(diagnostics) - 1
        assert len(solution) == 1 + 20 * steps
        assert len(interfaces) == 1 + 21 * steps

    def test_solve_out_from_config(self):
        """
        El sistema debe usar el directorio de salida de la configuración
        cuando no se indica --out.
        """

        config = self.write_config(out=self.path('from-config'), stride=1000)
        code, stderr = self.run_cli('solve', '--config', config)

        assert code == 0, stderr
        rows = self.read('from-config', 'solution.csv').decode().splitlines()
        assert len(rows) == 1 + 2 * 20

    def test_strict_bounds(self):
        """
        El sistema debe terminar con código 2 cuando una cota se viola en
        modo estricto.
        """

        def violate(record, constants, mode='monitor'):
            return record, [Violation('tv', record.step, 2.0, 1.0, -1.0)]

        config = self.write_config()
        with mock.patch('ibvp.diagnostics.compare_bounds', side_effect=violate):
            code, stderr = self.run_cli('solve', '--config', config, '--strict-bounds',
                                        '--out', self.path('strict'))

        assert code == 2
        assert 'BoundViolation' in stderr
        assert 'tv' in stderr

    def test_config_syntax(self):
        """
        El sistema debe terminar con código 3 ante JSON inválido, un archivo
        inexistente o un objeto que no es diccionario.
        """

        broken = self.path('broken.json')
        with open(broken, 'w') as handle:
            handle.write('{"N": ')
        listed = self.path('list.json')
        with open(listed, 'w') as handle:
            handle.write('[1, 2]')

        for path in (broken, listed, self.path('missing.json')):
            code, stderr = self.run_cli('bounds', '--config', path, '--out', self.path('c.json'))
            assert code == 3
            assert 'ConfigSyntax' in stderr

    def test_parse_config(self):
        """
        El sistema debe completar los valores por omisión, resolver las rutas
        respecto del archivo y reportar todos los campos inválidos juntos.
        """

        config = cli.parse_config(self.write_config())
        assert config.N == 20
        assert config.alpha == 'auto' and config.mode == 'monitor' and config.stride == 1
        assert config.base_dir == os.path.abspath(self.tmp)

        with self.assertRaises(ConfigSemantic) as context:
            cli.parse_config(self.write_config('bad.json', N=0, T=-1.0))
        assert context.exception.fields == ['N', 'T']

        high = {'data.initial': {'kind': 'constant', 'value': 2.0}}
        with self.assertRaises(ConfigSemantic) as context:
            cli.parse_config(self.write_config('high.json', **high))
        assert context.exception.fields == ['flux.box.rho']

    def test_config_semantic(self):
        """
        El sistema debe terminar con código 3 e indicar el campo cuando N = 0.
        """

        config = self.write_config('zero.json', N=0)
        code, stderr = self.run_cli('solve', '--config', config, '--out', self.path('zero'))

        assert code == 3
        assert 'ConfigSemantic' in stderr
        assert '  N: ' in stderr
        assert not os.path.exists(self.path('zero'))

    def test_usage_errors(self):
        """
        El sistema debe tratar los errores de uso como errores de
        configuración.
        """

        assert self.run_cli()[0] == 3
        assert self.run_cli('plot')[0] == 3
        assert self.run_cli('solve')[0] == 3

    def test_numeric_failure(self):
        """
        El sistema debe terminar con código 5 e informar el paso cuando el
        estado deja de ser finito.
        """

        config = self.write_config()
        failure = NonFiniteState(u'Estado no finito', step=3)
        with mock.patch('ibvp.cli.solve', side_effect=failure):
            code, stderr = self.run_cli('solve', '--config', config, '--out', self.path('nan'))

        assert code == 5
        assert 'NonFiniteState' in stderr
        assert '(paso 3)' in stderr
        assert not os.path.exists(self.path('nan'))

    def test_output_failure(self):
        """
        El sistema debe terminar con código 5 y un mensaje legible cuando no
        puede crear el directorio de salida.
        """

        blocker = self.path('blocker')
        with open(blocker, 'w') as handle:
            handle.write('')

        config = self.write_config()
        code, stderr = self.run_cli('solve', '--config', config,
                                    '--out', os.path.join(blocker, 'out'))
        assert code == 5
        assert 'OutputError' in stderr

        code, stderr = self.run_cli('bounds', '--config', config,
                                    '--out', os.path.join(blocker, 'constants.json'))
        assert code == 5
        assert 'OutputError' in stderr

        with mock.patch('ibvp.cli.do_bounds', side_effect=PermissionError('denegado')):
            code, stderr = self.run_cli('bounds', '--config', config)
        assert code == 5
        assert 'PermissionError' in stderr

    def test_write_csv_formats(self):
        """
        El sistema debe escribir todo real, incluso float32, con 17 dígitos
        significativos y los enteros tal cual.
        """

        utils.write_csv(self.path('values.csv'), ['a', 'b', 'c', 'd'],
                        [[np.float32(0.1), 0.1, 3, np.int64(4)]])
        rows = self.read('values.csv').decode().splitlines()

        assert rows[0] == 'a,b,c,d'
        assert rows[1] == '0.10000000149011612,0.10000000000000001,3,4'

    def test_admissibility(self):
        """
        El sistema debe terminar con código 4 para un núcleo lookahead sin
        desfase.
        """

        config = self.write_config(kernel={'name': 'lookahead', 'h': 0.2})
        code, stderr = self.run_cli('solve', '--config', config, '--out', self.path('la'))

        assert code == 4
        assert 'NonPositiveWindow' in stderr

    def test_bounds(self):
        """
        El sistema debe escribir las curvas de constantes en JSON.
        """

        config = self.write_config()
        code, stderr = self.run_cli('-v', 'bounds', '--config', config,
                                    '--out', self.path('constants.json'))

        assert code == 0, stderr
        report = self.read_json('constants.json')
        for name in ('C1', 'C2', 'K1', 'K2', 'K3', 'K4', 'Cx', 'Ct', 'Cxt', 'tv_bound'):
            assert len(report[name]) == len(report['t'])
        assert report['t'][0] == 0.0
        assert abs(report['C1'][0] - 0.4) < 1e-12
        assert report['metadata']['estimated'] is False
        assert 'R' in report['box_excess']

    def test_convergence(self):
        """
        El sistema debe escribir diferencias y órdenes por nivel.
        """

        config = self.write_config()
        code, stderr = self.run_cli('convergence', '--config', config, '--levels', '10,20,40',
                                    '--out', self.path('conv.json'))

        assert code == 0, stderr
        result = self.read_json('conv.json')
        assert result['levels'] == [10, 20, 40]
        assert len(result['differences']) == 2
        assert len(result['orders']) == 1
        assert result['lambda'] > 0.0

        code, stderr = self.run_cli('convergence', '--config', config, '--levels', '10,x',
                                    '--out', self.path('bad.json'))
        assert code == 3

    def test_stability(self):
        """
        El sistema debe escribir la distancia medida y la cota.
        """

        config = self.write_config()
        code, stderr = self.run_cli('stability', '--config', config,
                                    '--perturb', 'eps=1e-3,target=initial',
                                    '--out', self.path('stab.json'))

        assert code == 0, stderr
        result = self.read_json('stab.json')
        assert abs(result['A'] - 1e-3) < 1e-12
        assert result['measured'] > 0.0
        assert result['distance_left'] == 0.0

        code, stderr = self.run_cli('stability', '--config', config, '--perturb', 'eps=x',
                                    '--out', self.path('bad.json'))
        assert code == 3

    def test_entropy_check(self):
        """
        El sistema debe verificar la entropía discreta en cada paso y no
        encontrar violaciones en la configuración de referencia.
        """

        config = self.write_config()
        code, stderr = self.run_cli('entropy-check', '--config', config,
                                    '--out', self.path('entropy.json'))

        assert code == 0, stderr
        result = self.read_json('entropy.json')
        NT = len(result['steps'])
        assert result['steps'] == list(range(1, NT + 1))
        assert len(result['entropy_plus_max']) == NT
        assert result['violations'] == 0
        assert result['worst_plus'] <= 1e-12
        assert result['worst_minus'] <= 1e-12
