"""Exception hierarchy shared by all twistcert modules."""


class TwistCertError(Exception):
    """Base class for all errors raised by this package."""


class MultipleRoot(TwistCertError):
    """Hensel lifting hit a root where the derivative vanishes mod p."""


class FactorizationOverflow(TwistCertError):
    """A prime factor (or the input itself) exceeds the supported bound."""


class NonCoprimeModuli(TwistCertError):
    """CRT input moduli share a common factor."""


class SingularCurve(TwistCertError):
    """Discriminant of the requested Weierstrass model vanishes."""


class NotSquarefree(TwistCertError):
    """A twisting integer was required to be squarefree and is not."""


class EvenD(TwistCertError):
    """The twisting integer must be odd for A-set accounting."""


class BadPrime(TwistCertError):
    """Prime classification requested at an even or bad-reduction prime."""


class NotFullTorsion(TwistCertError):
    """Local machinery needs dim E(Q_q)[2] = 2 at the given prime."""


class NotInert(TwistCertError):
    """Operation requires the prime to be inert in the quadratic field."""


class SamplingExhausted(TwistCertError):
    """Kummer-image point sampling failed to reach dimension 2.

    This is provably impossible for valid inputs, so it signals a bug
    in the caller or in the lifting machinery rather than bad data.
    """


class SearchExhausted(TwistCertError):
    """A deterministic prime search ran past its bound."""


class HypothesisFailed(TwistCertError):
    """A certificate hypothesis (no 2-torsion, K != Q(sqrt(D)), ...) fails."""


class MissingExternalInput(TwistCertError):
    """A derived ledger field was requested without its external inputs."""


class VerificationFailed(TwistCertError):
    """Certificate re-verification found a failing check.

    Carries the name of the first failing check and optional context.
    """

    def __init__(self, check: str, detail=None):
        self.check = check
        self.detail = detail
        msg = check if detail is None else f"{check}: {detail}"
        super().__init__(msg)
