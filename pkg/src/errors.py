"""Exception hierarchy shared by the library and the command line.

Every error knows the exit code the CLI should use and can render itself as the
JSON error object written to stderr.
"""


class HogeomError(Exception):
    exit_code = 3
    code = "numerical_error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        return {
            'status': 'error',
            'code': self.code,
            'message': self.message,
            'details': jsonable(self.details),
        }


def jsonable(value):
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    if hasattr(value, 'tolist'):
        return jsonable(value.tolist())
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


# --- Configuration errors (exit code 2) ---
class ConfigError(HogeomError):
    exit_code = 2
    code = "config_error"


class RankUnsupported(ConfigError):
    code = "rank_unsupported"


class MethodUnavailable(ConfigError):
    code = "method_unavailable"


# --- Numerical errors (exit code 3) ---
class NotRepresentable(HogeomError):
    code = "not_representable"


class PoleAtNonpositiveInteger(HogeomError):
    code = "pole_at_nonpositive_integer"


class ParameterPole(HogeomError):
    code = "parameter_pole"


class NonConvergent(HogeomError):
    code = "non_convergent"


class NonIntegrableEndpoint(HogeomError):
    code = "non_integrable_endpoint"


class CFunctionPole(HogeomError):
    code = "c_function_pole"


class GenericityViolation(HogeomError):
    code = "genericity_violation"


class OutsideChamber(HogeomError):
    code = "outside_chamber"


class TruncationNotConverged(HogeomError):
    code = "truncation_not_converged"


class InconsistentSystem(HogeomError):
    code = "inconsistent_system"


class DivisionNotExact(HogeomError):
    code = "division_not_exact"


class OutsideTrustRadius(HogeomError):
    code = "outside_trust_radius"


class StripViolation(HogeomError):
    code = "strip_violation"


class ClosedFormMismatch(HogeomError):
    code = "closed_form_mismatch"


class SingularPoint(HogeomError):
    code = "singular_point"
