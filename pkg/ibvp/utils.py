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


import csv
import io
import json
import numbers
import os
import tempfile

import numpy as np
from scipy import integrate
from scipy import special

from ibvp.errors import OutputError


def gauss_nodes(lo, hi, panels, points=4):
    """
    Retorna los nodos y pesos de una cuadratura compuesta de Gauss-Legendre
    sobre cada intervalo ``[lo[i], hi[i]]`` dividido en *panels* subpaneles.

    *lo* y *hi* pueden ser arreglos; el resultado tiene forma
    ``(len(lo), panels * points)``. Los nodos son interiores, de modo que un
    salto en un extremo no afecta el promedio.
    """

    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    xi, wi = special.roots_legendre(points)

    width = (hi - lo) / panels
    starts = lo[:, None] + width[:, None] * np.arange(panels)[None, :]
    nodes = starts[:, :, None] + 0.5 * width[:, None, None] * (xi[None, None, :] + 1.0)
    weights = 0.5 * width[:, None, None] * np.broadcast_to(wi, nodes.shape)

    shape = (lo.size, panels * points)
    return nodes.reshape(shape), weights.reshape(shape)


def simpson(func, lo, hi, panels):
    """
    Regla de Simpson compuesta de *func* sobre ``[lo, hi]``. Acepta arreglos
    de extremos y integra cada intervalo por separado.
    """

    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    panels = int(panels) + int(panels) % 2

    s = np.linspace(0.0, 1.0, panels + 1)
    nodes = lo[:, None] + (hi - lo)[:, None] * s[None, :]
    values = func(nodes)
    result = integrate.simpson(values, x=nodes, axis=1)
    return result


def total_variation(values):
    return float(np.sum(np.abs(np.diff(values))))


def format_float(value):
    # 17 dígitos significativos: lectura exacta del binario.
    return '%.17g' % value


def is_real(value):
    # los enteros (y bool) se escriben tal cual
    return isinstance(value, numbers.Real) and not isinstance(value, numbers.Integral)


def atomic_write(path, text):
    """
    Escribe *text* en un archivo temporal del mismo directorio y lo renombra
    a *path*; un proceso interrumpido nunca deja un archivo a medias con el
    nombre final.
    """

    directory = os.path.dirname(os.path.abspath(path))
    try:
        if not os.path.isdir(directory):
            os.makedirs(directory)
        handle, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp-')
    except OSError as e:
        raise OutputError(u'No se puede escribir %s: %s' % (path, e))

    try:
        with os.fdopen(handle, 'w', newline='') as tmp:
            tmp.write(text)
        os.replace(tmp_path, path)
    except Exception as e:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        if isinstance(e, OSError):
            raise OutputError(u'No se puede escribir %s: %s' % (path, e))
        raise


def write_csv(path, fieldnames, rows):
    """
    Escribe las filas *rows* (secuencias de números) con la cabecera
    *fieldnames*.
    """

    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([format_float(value) if is_real(value) else value for value in row])

    atomic_write(path, out.getvalue())


def to_jsonable(value):
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return dict((k, to_jsonable(v)) for k, v in value.items())
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if not np.isfinite(value):
            return None
        return float(format_float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_json(path, obj):
    text = json.dumps(to_jsonable(obj), indent=2, sort_keys=True)
    atomic_write(path, text + '\n')
