"""Dyad-level tie models: logistic regression and an MPLE triangle model.

Every unordered node pair (dyad) of a view contributes one Bernoulli
observation: is the pair an edge? Covariates are an intercept ("edges")
and four match indicators, one per attribute, equal to 1 when both
endpoints carry the same known code (Missing never matches anything,
itself included). The triangle model adds the dyad's common-neighbor
count, the change in triangle count from toggling the dyad, and is fit
by maximum pseudolikelihood, which for this statistic is exactly the
grouped logistic fit below.

Dyads are never materialized one by one: covariate patterns repeat
heavily, so blocks of rows are reduced to counts per distinct pattern
(at most 16 match combinations times the distinct common-neighbor
counts) and the likelihood is evaluated on the grouped form.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator

from .errors import DegenerateInputError, IdentifiabilityError, SeparationError
from .validation import check_nonempty_view

__all__ = [
    "MATCH_FEATURES",
    "DyadDesign",
    "DyadModelFit",
    "build_design",
    "fit_logistic",
    "fit_ergm_mple",
    "coefficient_summary",
    "BoxStats",
    "DyadTieModel",
]

#: match covariates in reporting order, after the "edges" intercept
MATCH_FEATURES = ("match_year", "match_residence", "match_hs", "match_major")

_MATCH_ATTRS = (("match_year", "year"), ("match_residence", "residence"),
                ("match_hs", "high_school"), ("match_major", "major"))

DEFAULT_NODE_GUARD = 10_000


@dataclass(frozen=True)
class DyadDesign:
    """Grouped dyad observations for one view.

    Each row of ``patterns`` is a distinct covariate combination;
    ``dyads`` counts how many node pairs show it and ``ties`` how many of
    those pairs are edges.
    """

    feature_names: tuple
    patterns: np.ndarray
    dyads: np.ndarray
    ties: np.ndarray
    n_nodes: int
    with_triangle: bool

    @property
    def n_dyads(self):
        return int(self.dyads.sum())

    @property
    def n_ties(self):
        return int(self.ties.sum())


@dataclass(frozen=True)
class DyadModelFit:
    """Fitted dyad model: point estimates, standard errors, diagnostics."""

    estimator: str
    feature_names: tuple
    theta: np.ndarray
    std_errors: np.ndarray
    loglik: float
    n_iter: int
    converged: bool
    dropped: tuple
    n_dyads: int
    n_ties: int

    def coefficient(self, name):
        """Estimate for ``name``, or None if it was dropped."""
        if name in self.feature_names:
            return float(self.theta[self.feature_names.index(name)])
        return None

    def as_dict(self):
        out = {"estimator": self.estimator, "loglik": self.loglik,
               "n_iter": self.n_iter, "converged": self.converged,
               "n_dyads": self.n_dyads, "n_ties": self.n_ties,
               "dropped": list(self.dropped), "coefficients": {}}
        for i, name in enumerate(self.feature_names):
            out["coefficients"][name] = {"estimate": float(self.theta[i]),
                                         "se": float(self.std_errors[i])}
        return out


def build_design(view, with_triangle=False, max_nodes=DEFAULT_NODE_GUARD):
    """Grouped dyad design for a view.

    Parameters
    ----------
    view : NetworkView or Network
    with_triangle : bool, default False
        Append the common-neighbor count of each dyad as a covariate.
    max_nodes : int or None, default 10000
        Refuse views above this size (the dyad count grows
        quadratically); pass None to lift the guard.

    Returns
    -------
    DyadDesign
    """
    net = check_nonempty_view(view, "build_design")
    n = net.n
    if n < 2:
        raise ValueError("dyad design needs at least 2 nodes")
    if max_nodes is not None and n > max_nodes:
        raise ValueError(
            "view has %d nodes, above the dyad guard of %d; raise or lift "
            "the guard to fit anyway" % (n, max_nodes))

    codes = {attr: net.attributes[attr] for _, attr in _MATCH_ATTRS}
    adjacency = net.adjacency()
    base = 16 * (n + 1) if with_triangle else 16
    dyad_counts = np.zeros(base, dtype=np.int64)
    tie_counts = np.zeros(base, dtype=np.int64)

    cols = np.arange(n)
    block = max(8, 4_000_000 // max(n, 1))
    for start in range(0, n, block):
        stop = min(start + block, n)
        rows = np.arange(start, stop)
        upper = cols[None, :] > rows[:, None]

        keys = np.zeros((stop - start, n), dtype=np.int64)
        for bit, (_, attr) in enumerate(_MATCH_ATTRS):
            col = codes[attr]
            match = (col[rows][:, None] == col[None, :]) & (col[None, :] != 0)
            keys |= match.astype(np.int64) << bit
        if with_triangle:
            common = (adjacency[start:stop] @ adjacency).toarray()
            keys += 16 * np.rint(common).astype(np.int64)

        tied = adjacency[start:stop].toarray() > 0
        flat = keys[upper]
        dyad_counts += np.bincount(flat, minlength=base)
        tie_counts += np.bincount(keys[upper & tied], minlength=base)

    present = np.flatnonzero(dyad_counts)
    k = 5 + (1 if with_triangle else 0)
    patterns = np.zeros((present.size, k), dtype=np.float64)
    patterns[:, 0] = 1.0
    for bit in range(4):
        patterns[:, 1 + bit] = (present >> bit) & 1
    names = ("edges",) + MATCH_FEATURES
    if with_triangle:
        patterns[:, 5] = present // 16
        names = names + ("triangle",)

    design = DyadDesign(feature_names=names, patterns=patterns,
                        dyads=dyad_counts[present], ties=tie_counts[present],
                        n_nodes=n, with_triangle=with_triangle)
    if design.n_dyads != comb(n, 2):
        raise AssertionError("dyad enumeration lost pairs")
    return design


def fit_logistic(design, drop_nonidentifiable=False, max_iter=100):
    """Maximum-likelihood logistic fit of tie probability on the design.

    Parameters
    ----------
    design : DyadDesign
    drop_nonidentifiable : bool, default False
        Drop constant or duplicate covariates (never the intercept) and
        record them on the fit instead of raising.
    max_iter : int, default 100

    Returns
    -------
    DyadModelFit

    Raises
    ------
    DegenerateInputError
        If the view has no edges or is complete (constant response).
    IdentifiabilityError
        If a covariate is constant or collinear and dropping is off.
    SeparationError
        If some covariate separates ties from non-ties perfectly, so the
        likelihood has no maximum.
    """
    return _fit(design, "logistic-mle", drop_nonidentifiable, max_iter)


def fit_ergm_mple(design, drop_nonidentifiable=False, max_iter=100):
    """Maximum-pseudolikelihood fit of the triangle model.

    The design must be built with ``with_triangle=True``; the fit is the
    grouped logistic regression on the change statistics, reported with
    the same standard errors (inverse observed information).
    """
    if not design.with_triangle:
        raise ValueError("fit_ergm_mple needs a design built with "
                         "with_triangle=True")
    return _fit(design, "ergm-mple", drop_nonidentifiable, max_iter)


def _fit(design, estimator, drop_nonidentifiable, max_iter):
    x = design.patterns
    dyads = design.dyads.astype(np.float64)
    ties = design.ties.astype(np.float64)
    names = list(design.feature_names)

    total_d = design.n_dyads
    total_t = design.n_ties
    if total_t == 0:
        raise DegenerateInputError("view has no edges; tie response is all 0")
    if total_t == total_d:
        raise DegenerateInputError("view is complete; tie response is all 1")

    keep, dropped = _identifiable_columns(x, names, drop_nonidentifiable)
    x = x[:, keep]
    names = [names[j] for j in keep]

    theta = np.zeros(x.shape[1])
    theta[0] = np.log(total_t / (total_d - total_t))
    loglik = _loglik(x, dyads, ties, theta)
    n_iter = 0
    converged = False
    for n_iter in range(1, max_iter + 1):
        eta = x @ theta
        p = expit(eta)
        score = x.T @ (ties - dyads * p)
        weights = dyads * p * (1.0 - p)
        info = (x * weights[:, None]).T @ x
        try:
            step = np.linalg.solve(info, score)
        except np.linalg.LinAlgError:
            raise IdentifiabilityError(
                "information matrix is singular", covariates=names) from None

        new_theta = theta + step
        new_loglik = _loglik(x, dyads, ties, new_theta)
        halvings = 0
        while new_loglik < loglik - 1e-12 and halvings < 30:
            step *= 0.5
            new_theta = theta + step
            new_loglik = _loglik(x, dyads, ties, new_theta)
            halvings += 1

        rel_change = abs(new_loglik - loglik) / max(1.0, abs(loglik))
        theta, loglik = new_theta, new_loglik
        _check_separation(theta, names)
        if float(np.max(np.abs(score))) < 1e-8 or rel_change < 1e-10:
            converged = True
            break

    eta = x @ theta
    p = expit(eta)
    weights = dyads * p * (1.0 - p)
    info = (x * weights[:, None]).T @ x
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        raise IdentifiabilityError(
            "information matrix is singular at the optimum",
            covariates=names) from None
    std_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    return DyadModelFit(estimator=estimator, feature_names=tuple(names),
                        theta=theta, std_errors=std_errors,
                        loglik=float(loglik), n_iter=n_iter,
                        converged=converged, dropped=tuple(dropped),
                        n_dyads=total_d, n_ties=total_t)


def _loglik(x, dyads, ties, theta):
    eta = x @ theta
    return float(ties @ eta - dyads @ np.logaddexp(0.0, eta))


def _identifiable_columns(x, names, drop):
    """Indices of usable columns; raises or drops the rest."""
    bad = []
    keep = [0]
    for j in range(1, x.shape[1]):
        if np.all(x[:, j] == x[0, j]):
            bad.append(names[j])
        else:
            keep.append(j)
    dup = []
    deduped = [keep[0]]
    for idx, j in enumerate(keep[1:], start=1):
        if any(np.array_equal(x[:, j], x[:, l]) for l in deduped):
            dup.append(names[j])
        else:
            deduped.append(j)
    if (bad or dup) and not drop:
        raise IdentifiabilityError(
            "covariates not identifiable: %s" % ", ".join(bad + dup),
            covariates=bad + dup)
    keep = deduped
    if np.linalg.matrix_rank(x[:, keep]) < len(keep):
        raise IdentifiabilityError(
            "design matrix is rank deficient", covariates=[names[j] for j in keep])
    return keep, bad + dup


def _check_separation(theta, names):
    limit = 35.0
    worst = int(np.argmax(np.abs(theta)))
    if abs(theta[worst]) > limit:
        raise SeparationError(
            "coefficient for %r diverged; data are separated" % names[worst],
            covariate=names[worst])


@dataclass(frozen=True)
class BoxStats:
    """Five-number summary of one coefficient across institutions."""

    view: str
    coefficient: str
    count: int
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple


def coefficient_summary(fits):
    """Box-plot summaries of fitted coefficients across institutions.

    Parameters
    ----------
    fits : sequence of (institution, view_kind, DyadModelFit)

    Returns
    -------
    list of BoxStats
        One row per (view, coefficient) with at least two fitted values;
        the edges intercept is reported negated (as ``-edges``) so that
        larger is sparser, matching how the match terms read. Whiskers
        are the most extreme values within 1.5 IQR of the quartiles.

    Raises
    ------
    ValueError
        If fewer than two fits are supplied.
    """
    fits = list(fits)
    if len(fits) < 2:
        raise ValueError("coefficient_summary needs at least 2 fits")

    groups = {}
    for institution, view_kind, fit in fits:
        for name in fit.feature_names:
            value = fit.coefficient(name)
            label = name
            if name == "edges":
                label, value = "-edges", -value
            groups.setdefault((view_kind, label), []).append(
                (str(institution), float(value)))

    out = []
    for (view_kind, label) in sorted(groups):
        rows = sorted(groups[(view_kind, label)])
        if len(rows) < 2:
            continue
        values = np.array([v for _, v in rows])
        q1, med, q3 = np.percentile(values, [25.0, 50.0, 75.0])
        iqr = q3 - q1
        lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
        inside = values[(values >= lo_fence) & (values <= hi_fence)]
        outliers = tuple((inst, v) for inst, v in rows
                         if v < lo_fence or v > hi_fence)
        out.append(BoxStats(view=view_kind, coefficient=label, count=len(rows),
                            median=float(med), q1=float(q1), q3=float(q3),
                            whisker_low=float(inside.min()),
                            whisker_high=float(inside.max()),
                            outliers=outliers))
    return out


class DyadTieModel(BaseEstimator):
    """Estimator wrapper over the dyad models.

    Parameters
    ----------
    model : {"logistic", "ergm"}, default "logistic"
        Plain match-covariate logistic regression, or the triangle model
        fit by maximum pseudolikelihood.
    drop_nonidentifiable : bool, default False
        Drop degenerate covariates instead of raising.
    max_nodes : int or None, default 10000
        Dyad-count guard passed to the design builder.

    Attributes
    ----------
    coef_ : ndarray
    stderr_ : ndarray
    feature_names_ : tuple
    fit_ : DyadModelFit
    """

    def __init__(self, model="logistic", drop_nonidentifiable=False,
                 max_nodes=DEFAULT_NODE_GUARD):
        self.model = model
        self.drop_nonidentifiable = drop_nonidentifiable
        self.max_nodes = max_nodes

    def fit(self, X, y=None):
        if self.model not in ("logistic", "ergm"):
            raise ValueError("model must be 'logistic' or 'ergm', got %r"
                             % (self.model,))
        design = build_design(X, with_triangle=self.model == "ergm",
                              max_nodes=self.max_nodes)
        if self.model == "ergm":
            fit = fit_ergm_mple(design, self.drop_nonidentifiable)
        else:
            fit = fit_logistic(design, self.drop_nonidentifiable)
        self.fit_ = fit
        self.coef_ = fit.theta
        self.stderr_ = fit.std_errors
        self.feature_names_ = fit.feature_names
        self.loglik_ = fit.loglik
        self.converged_ = fit.converged
        return self
