"""Exception types shared by the library and the command line."""


class ToricToolError(Exception):
    exit_code = 2
    kind = "error"


class ParseError(ToricToolError):
    exit_code = 1
    kind = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.message = message


class PreconditionError(ToricToolError, ValueError):
    exit_code = 2
    kind = "precondition_violation"


class PrecisionError(ToricToolError, ArithmeticError):
    exit_code = 3
    kind = "precision_failure"
