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


class IBVPError(Exception):
    """
    Error base del paquete. Cada subclase declara el código de salida que
    la línea de comandos debe retornar cuando el error se propaga.
    """

    exit_code = 5

    def __init__(self, message='', step=None):
        super(IBVPError, self).__init__(message)
        self.message = message
        self.step = step

    def __str__(self):
        if self.step is None:
            return self.message
        return u'%s (paso %s)' % (self.message, self.step)


# Configuración

class ConfigError(IBVPError):
    exit_code = 3


class ConfigSyntax(ConfigError):
    pass


class ConfigSemantic(ConfigError):
    """
    Agrupa todos los errores de validación encontrados, no solo el primero.
    *errors* es una lista de pares ``(campo, mensaje)``.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        message = u'; '.join(u'%s: %s' % (field, msg) for field, msg in self.errors)
        super(ConfigSemantic, self).__init__(message)

    @property
    def fields(self):
        return [field for field, msg in self.errors]


# Admisibilidad (CFL, núcleo, dominio)

class AdmissibilityError(IBVPError):
    exit_code = 4


class InvalidMesh(AdmissibilityError):
    pass


class InvalidDomain(InvalidMesh):
    pass


class InvalidCellCount(InvalidMesh):
    pass


class CFLViolation(AdmissibilityError):
    pass


class NonPositiveWindow(AdmissibilityError):
    pass


class DegenerateSupport(AdmissibilityError):
    pass


class InvalidKernel(AdmissibilityError):
    pass


class InvalidFlux(AdmissibilityError):
    pass


class EmptyBox(AdmissibilityError):
    pass


class NegativeDatum(AdmissibilityError):
    pass


class MissingNorm(AdmissibilityError):
    pass


# Fallos numéricos en ejecución

class NumericError(IBVPError):
    exit_code = 5


class NonFiniteValue(NumericError):
    pass


class NonFiniteState(NumericError):
    pass


class LengthMismatch(NumericError):
    pass


class StateMismatch(NumericError):
    pass


class BoundViolation(IBVPError):
    """
    Se lanza en modo estricto cuando alguna cota a priori no se cumple.
    """

    exit_code = 2

    def __init__(self, violations, step=None):
        self.violations = list(violations)
        names = u', '.join(sorted(set(v.name for v in self.violations)))
        super(BoundViolation, self).__init__(u'Cotas violadas: %s' % names, step)


# Escritura de resultados

class OutputError(IBVPError):
    """
    No se pudo crear el directorio de salida o escribir un archivo.
    """

    exit_code = 5
