class PathtorError(Exception):
    """Base class for input and usage errors.

    ``code`` is a short machine-readable identifier reported by the CLI.
    """

    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DigraphParseError(PathtorError):
    code = "parse_error"

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, code: str | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where, code)
        self.line = line
        self.column = column


class InvalidDigraph(PathtorError):
    code = "invalid_digraph"


class NotInOmega(PathtorError):
    code = "not_in_omega"


class UnsupportedInnerProduct(PathtorError):
    code = "unsupported_inner_product"
