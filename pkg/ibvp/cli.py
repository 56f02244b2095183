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


import argparse
import json
import logging
import os
import sys

from ibvp import utils
from ibvp.diagnostics import COLUMNS, worst
from ibvp.errors import ConfigSemantic, ConfigSyntax, IBVPError, OutputError
from ibvp.experiments import Perturbation, convergence_study, stability_experiment
from ibvp.forms import validate
from ibvp.solver import flux_box, prepare, solve


def parse_config(path):
    """
    Lee y valida la configuración JSON de *path*. Las rutas relativas de
    los datos csv se resuelven respecto del directorio del archivo.
    """

    try:
        with open(path) as handle:
            data = json.load(handle)
    except (IOError, OSError) as e:
        raise ConfigSyntax(u'No se puede leer %s: %s' % (path, e))
    except ValueError as e:
        raise ConfigSyntax(u'JSON inválido en %s: %s' % (path, e))

    if not isinstance(data, dict):
        raise ConfigSyntax(u'La configuración debe ser un objeto JSON: %s' % path)

    return validate(data, base_dir=os.path.dirname(os.path.abspath(path)))


def write_solution(trajectory, out):
    centers = trajectory.mesh.centers
    rows = ([state.t, x, rho] for state in trajectory.states
            for x, rho in zip(centers.tolist(), state.cells.tolist()))
    utils.write_csv(os.path.join(out, 'solution.csv'), ['t', 'x', 'rho'], rows)


def write_interfaces(trajectory, out):
    interfaces = trajectory.mesh.interfaces
    rows = ([state.t, x, R] for state in trajectory.states
            for x, R in zip(interfaces.tolist(), state.interface_R.tolist()))
    utils.write_csv(os.path.join(out, 'interfaces.csv'), ['t', 'x_interface', 'R'], rows)


def write_diagnostics(trajectory, out):
    rows = (record.row() for record in trajectory.records)
    utils.write_csv(os.path.join(out, 'diagnostics.csv'), list(COLUMNS), rows)


def do_solve(args):
    config = parse_config(args.config)
    if args.strict_bounds:
        config = config.update(mode='strict')
    out = args.out or config.out

    trajectory = solve(config)
    write_solution(trajectory, out)
    write_interfaces(trajectory, out)
    write_diagnostics(trajectory, out)

    if trajectory.outside_box:
        logging.warning(u'%d evaluaciones del flujo fuera de la región de validez'
                        % trajectory.outside_box)
    return 0


def do_bounds(args):
    config = parse_config(args.config)
    problem = prepare(config)
    report = problem.constants.as_dict()
    report['box_excess'] = problem.constants.box_excess(flux_box(config, config.T))
    utils.write_json(args.out, report)
    return 0


def parse_levels(text):
    try:
        return [int(level) for level in text.split(',')]
    except ValueError:
        raise ConfigSemantic([('levels', u'Lista de enteros inválida: %r' % text)])


def do_convergence(args):
    config = parse_config(args.config)
    result = convergence_study(config, parse_levels(args.levels))
    utils.write_json(args.out, result.as_dict())
    return 0


def do_stability(args):
    config = parse_config(args.config)
    result = stability_experiment(config, Perturbation.parse(args.perturb))
    utils.write_json(args.out, result.as_dict())
    return 0


def do_entropy_check(args):
    config = parse_config(args.config)
    trajectory = solve(config, entropy_every=1)

    records = trajectory.records[1:]
    plus = [r.entropy_plus_max for r in records]
    minus = [r.entropy_minus_max for r in records]
    report = {
        'steps': [r.step for r in records],
        'entropy_plus_max': plus,
        'entropy_minus_max': minus,
        'worst_plus': worst(records, 'entropy_plus_max'),
        'worst_minus': worst(records, 'entropy_minus_max'),
        'violations': len([v for v in trajectory.violations if v.name.startswith('entropy')]),
    }
    utils.write_json(args.out, report)
    return 0


class ArgumentParser(argparse.ArgumentParser):
    """
    Los errores de uso se reportan como errores de configuración.
    """

    def error(self, message):
        raise ConfigSyntax(message)


def build_parser():
    parser = ArgumentParser(prog='ibvp',
                            description=u'Esquema de Lax-Friedrichs para leyes de '
                                        u'conservación no locales con condiciones de borde.')
    parser.add_argument('-v', '--verbose', action='store_true')
    subparsers = parser.add_subparsers(dest='command', parser_class=ArgumentParser)
    subparsers.required = True

    solve_parser = subparsers.add_parser('solve')
    solve_parser.add_argument('--config', required=True)
    solve_parser.add_argument('--strict-bounds', action='store_true')
    solve_parser.add_argument('--out', default=None)
    solve_parser.set_defaults(func=do_solve)

    bounds_parser = subparsers.add_parser('bounds')
    bounds_parser.add_argument('--config', required=True)
    bounds_parser.add_argument('--out', default='constants.json')
    bounds_parser.set_defaults(func=do_bounds)

    convergence_parser = subparsers.add_parser('convergence')
    convergence_parser.add_argument('--config', required=True)
    convergence_parser.add_argument('--levels', default='100,200,400,800')
    convergence_parser.add_argument('--out', default='conv.json')
    convergence_parser.set_defaults(func=do_convergence)

    stability_parser = subparsers.add_parser('stability')
    stability_parser.add_argument('--config', required=True)
    stability_parser.add_argument('--perturb', default='eps=1e-3,target=initial')
    stability_parser.add_argument('--out', default='stab.json')
    stability_parser.set_defaults(func=do_stability)

    entropy_parser = subparsers.add_parser('entropy-check')
    entropy_parser.add_argument('--config', required=True)
    entropy_parser.add_argument('--out', default='entropy.json')
    entropy_parser.set_defaults(func=do_entropy_check)

    return parser


def report_error(e, stream):
    stream.write(u'ERROR [%s]: %s\n' % (e.__class__.__name__, e))
    if isinstance(e, ConfigSemantic):
        for field, message in e.errors:
            stream.write(u'  %s: %s\n' % (field, message))


def run_cli(argv, stderr=None):
    """
    Ejecuta la línea de comandos y retorna el código de salida: 0 éxito,
    2 cota violada en modo estricto, 3 configuración, 4 admisibilidad,
    5 falla numérica o de escritura de resultados.
    """

    stderr = stderr or sys.stderr

    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            stream=sys.stderr)
        return args.func(args)
    except IBVPError as e:
        report_error(e, stderr)
        return e.exit_code
    except OSError as e:
        report_error(e, stderr)
        return OutputError.exit_code
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == '__main__':
    main()
