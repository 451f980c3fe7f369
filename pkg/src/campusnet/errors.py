"""Exception types raised across the package."""


class CampusNetError(Exception):
    """Base class for all package-specific errors."""


class GraphFormatError(CampusNetError):
    """Malformed node table or edge list.

    Carries the offending file and 1-based line number when known so CLI
    users can locate the problem.
    """

    def __init__(self, message, path=None, line=None):
        detail = message
        if path is not None:
            where = str(path) if line is None else "%s:%d" % (path, line)
            detail = "%s (%s)" % (message, where)
        super().__init__(detail)
        self.path = path
        self.line = line


class DegenerateInputError(CampusNetError):
    """Input is structurally valid but the quantity is undefined on it.

    Examples: assortativity of a single-category network, modularity of an
    edgeless view, a Rand z-score whose permutation variance is zero.
    """


class IdentifiabilityError(CampusNetError):
    """A model covariate is constant or collinear, so its coefficient is
    not identifiable."""

    def __init__(self, message, covariates=()):
        super().__init__(message)
        self.covariates = tuple(covariates)


class SeparationError(CampusNetError):
    """The likelihood is unbounded because a covariate separates the
    response perfectly."""

    def __init__(self, message, covariate=None):
        super().__init__(message)
        self.covariate = covariate
