"""The tight family showing the degree threshold cannot be lowered.

For n >= 8 and 2 < nu with 3*nu < n + 2, the construction places two hub
vertices adjacent to everything except each other, and splits the rest into
three cliques (two of size nu-1, one of size n-2*nu).  The result is
2-connected with minimum degree exactly nu, yet every cycle leaves an edge of
some untouched clique in its complement: the hubs form a 2-cut separating
three edge-containing components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionViolatedError
from .graph import Graph, build_graph, is_two_connected
from .oracle import Outcome, TwoCutCertificate, find_ic_cycle_exact, find_two_cut_certificate

HUB_1 = 0
HUB_2 = 1

# Exhaustive non-existence checks stay affordable up to this size.
ORACLE_SIZE_LIMIT = 14


@dataclass(frozen=True)
class ExtremalSpec:
    n: int
    nu: int

    def __post_init__(self):
        if self.n < 8:
            raise PreconditionViolatedError(f"need n >= 8, got n={self.n}")
        if self.nu <= 2:
            raise PreconditionViolatedError(f"need nu > 2, got nu={self.nu}")
        if 3 * self.nu >= self.n + 2:
            raise PreconditionViolatedError(
                f"need 3*nu < n + 2, got 3*{self.nu} >= {self.n} + 2")
        # Implied by the above; kept as defense in depth.
        if self.nu - 1 < 2:
            raise PreconditionViolatedError("group size nu - 1 must be >= 2")
        if self.n - 2 * self.nu < 2:
            raise PreconditionViolatedError("third group size n - 2*nu must be >= 2")

    def groups(self) -> tuple[range, range, range]:
        a1 = range(2, 2 + self.nu - 1)
        a2 = range(a1.stop, a1.stop + self.nu - 1)
        a3 = range(a2.stop, self.n)
        return a1, a2, a3


def extremal_graph(n: int, nu: int) -> Graph:
    """Build the tight instance with the fixed labeling.

    Vertex 0 and 1 are the hubs; then the two (nu-1)-cliques, then the
    (n-2*nu)-clique.  The labeling is deterministic, so equal parameters give
    bit-identical graph6 output.
    """
    spec = ExtremalSpec(n, nu)
    edges: list[tuple[int, int]] = []
    for group in spec.groups():
        members = list(group)
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                edges.append((u, v))
    for v in range(2, n):
        edges.append((HUB_1, v))
        edges.append((HUB_2, v))
    return build_graph(n, edges)


@dataclass
class ExtremalReport:
    n: int
    nu: int
    min_degree_is_nu: bool
    two_connected: bool
    certificate: TwoCutCertificate | None
    certificate_ok: bool
    oracle_ran: bool
    oracle_not_exists: bool | None
    degree_multiset_ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "nu": self.nu,
            "min_degree_is_nu": self.min_degree_is_nu,
            "two_connected": self.two_connected,
            "certificate_cut": list(self.certificate.cut) if self.certificate else None,
            "certificate_ok": self.certificate_ok,
            "oracle_ran": self.oracle_ran,
            "oracle_not_exists": self.oracle_not_exists,
            "degree_multiset_ok": self.degree_multiset_ok,
            "failures": list(self.failures),
            "ok": self.ok,
        }


def expected_degree_multiset(n: int, nu: int) -> dict[int, int]:
    """Closed form: {nu}^(2nu-2), {n-2nu+1}^(n-2nu), {n-2}^2."""
    out: dict[int, int] = {}
    for d, count in ((nu, 2 * nu - 2), (n - 2 * nu + 1, n - 2 * nu), (n - 2, 2)):
        out[d] = out.get(d, 0) + count
    return out


def validate_extremal(g: Graph, n: int, nu: int,
                      run_oracle: bool | None = None,
                      budget: int | None = None) -> ExtremalReport:
    """Check the structural claims on a generated instance.

    Verifies: minimum degree equals nu exactly; 2-connectivity; the hub pair
    is a 2-cut with three edge-containing components; the closed-form degree
    multiset; and (for n <= ORACLE_SIZE_LIMIT unless overridden) that the
    exact search confirms non-existence.
    """
    ExtremalSpec(n, nu)
    report = ExtremalReport(
        n=n, nu=nu,
        min_degree_is_nu=False, two_connected=False,
        certificate=None, certificate_ok=False,
        oracle_ran=False, oracle_not_exists=None,
        degree_multiset_ok=False,
    )
    if g.n != n:
        report.failures.append("vertex count mismatch")
        return report

    report.min_degree_is_nu = g.min_degree() == nu
    if not report.min_degree_is_nu:
        report.failures.append("minimum degree must equal nu exactly")

    actual = {}
    for v in range(n):
        actual[g.degree(v)] = actual.get(g.degree(v), 0) + 1
    report.degree_multiset_ok = actual == expected_degree_multiset(n, nu)
    if not report.degree_multiset_ok:
        report.failures.append("degree multiset differs from the closed form")

    report.two_connected = is_two_connected(g)
    if not report.two_connected:
        report.failures.append("instance must be 2-connected")

    cert = find_two_cut_certificate(g)
    report.certificate = cert
    report.certificate_ok = (
        cert is not None
        and set(cert.cut) == {HUB_1, HUB_2}
        and cert.edge_component_count() >= 3
    )
    if not report.certificate_ok:
        report.failures.append("hub pair must be a 2-cut with 3 edge components")

    if run_oracle is None:
        run_oracle = n <= ORACLE_SIZE_LIMIT
    if run_oracle:
        result = find_ic_cycle_exact(g, budget=budget)
        report.oracle_ran = True
        report.oracle_not_exists = result.outcome == Outcome.NOT_EXISTS
        if not report.oracle_not_exists:
            report.failures.append(
                "exact search must confirm no cycle has independent complement")
    return report
