class PragmaBenchError(Exception):
    """Base class for every harness error"""


# Lexing / structure scanning

class UnbalancedLoop(PragmaBenchError):
    """A `loop` without `end loop` (or the reverse); file is outside the supported subset"""


class MalformedPragma(PragmaBenchError):
    """A pragma whose parentheses do not balance before its terminator"""


class StaleSites(PragmaBenchError):
    """Sites were scanned from a different version of the source"""


# Prover

class ProverError(PragmaBenchError):
    pass


class ToolNotFound(ProverError):
    """The GNATprove executable is not on PATH"""


class ProverFailure(ProverError):
    """The prover crashed or could not be run on a case"""


class CassetteMiss(ProverError):
    """A replay cassette has no entry for the request key"""

    def __init__(self, key, cassette=None):
        self.key = key
        self.cassette = cassette
        where = f" in {cassette}" if cassette else ""
        super().__init__(f"No cassette entry for key {key}{where}")


# LLM providers

class ProviderError(PragmaBenchError):
    pass


class AuthError(ProviderError):
    pass


class RateLimited(ProviderError):
    pass


class ScriptExhausted(ProviderError):
    pass


# Prompting / candidates / reporting

class CapExceeded(PragmaBenchError):
    """System message longer than the 512 character cap"""


class NoCodeFound(PragmaBenchError):
    """A model response without any usable fenced code block"""


class UnknownCase(PragmaBenchError):
    """An outcome refers to a case id that the manifest does not contain"""
