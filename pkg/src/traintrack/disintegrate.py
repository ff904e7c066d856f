"""Almost invariant subgraphs, the admissible lattice, and the maps f_a.

A completely split map decomposes into almost invariant subgraphs
X_1 ... X_M: the equivalence classes, over strata not fixed by f, of the
relation generated by "some A_j occurs as a term in the QE-splitting of
f(A_i)", where A ranges over single edges of irreducible strata and over
connecting paths of zero strata.  Quasi-exceptional terms couple the
classes linearly: a term of f(E_k), E_k in X_r, lying in the family
E_i w^* inverse(E_j) forces

    a_r (d_i - d_j) = a_s d_i - a_t d_j

where X_s, X_t contain E_i, E_j with exponents d_i, d_j.  The integer
tuples satisfying every such relation form a sublattice L of Z^M; the
nonnegative members are the admissible tuples.  Each admissible a yields
the homotopy equivalence f_a acting as f^{a_i} on X_i and fixing every
f-fixed edge, and edge-image-wise f_a f_b = f_b f_a = f_{a+b}.
"""

import itertools

from .ct import check_ct, connecting_paths, principal_vertices
from .errors import AdmissibilityError, InconsistentFiltration
from .freegroup import map_is_pi1_surjective
from .intlin import kernel_basis
from .maps import GraphMap, filtration
from .nielsen import (
    TERM_CONN,
    TERM_EDGE,
    TERM_QE,
    axes,
    build_catalog,
    default_length_bound,
    qe_split,
)


class AlmostInvariantPartition:
    """The partition X_1 ... X_M of the non-fixed strata.

    ``classes`` holds, per X_i, the sorted tuple of stratum indices it
    comprises; ``subgraphs`` the corresponding edge sets.
    """

    def __init__(self, m, filt, classes):
        self.map = m
        self.filtration = filt
        self.classes = tuple(tuple(sorted(c)) for c in classes)
        self.M = len(self.classes)
        self._by_stratum = {}
        for i, cls in enumerate(self.classes):
            for s in cls:
                self._by_stratum[s] = i
        self.subgraphs = tuple(
            frozenset(e for s in cls for e in filt[s].edges)
            for cls in self.classes
        )

    def class_of_stratum(self, s):
        """Index of the X_i containing stratum s, or None for fixed strata."""
        return self._by_stratum.get(s)

    def class_of_edge(self, edge):
        return self._by_stratum.get(self.filtration.level(edge))

    def __repr__(self):
        parts = ["X_%d=%s" % (i + 1, sorted(sub)) for i, sub in enumerate(self.subgraphs)]
        return "<partition %s>" % ", ".join(parts)


def _pieces(m, filt, i):
    """The paths A_i of a stratum: its edges, or its connecting paths."""
    g = m.graph
    if filt[i].kind == "zero":
        return connecting_paths(m, i, filt)
    return [g.path([e]) for e in sorted(filt[i].edges, key=g.edge_index)]


def almost_invariant_subgraphs(m, catalog=None):
    """Union-find closure of "A_j is a term in the QE-splitting of f(A_i)"."""
    if catalog is None:
        catalog = build_catalog(m)
    filt = filtration(m)
    nodes = [i for i, s in enumerate(filt) if s.kind != "fixed"]
    parent = {i: i for i in nodes}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    # A zero stratum shares its class with the first irreducible stratum
    # above it (every edge of the zero stratum sits inside a connecting
    # path crossed by an image from that stratum).
    for i in nodes:
        if filt[i].kind == "zero":
            j = i + 1
            while j < len(filt) and filt[j].kind == "zero":
                j += 1
            if j == len(filt):
                raise InconsistentFiltration(
                    "zero stratum {%s} is not below any irreducible stratum"
                    % " ".join(filt[i].edges)
                )
            union(i, j)

    for i in nodes:
        for piece in _pieces(m, filt, i):
            image = m.apply(piece)
            if image.is_trivial():
                continue
            for t in qe_split(m, image, catalog).terms:
                if t.kind not in (TERM_EDGE, TERM_CONN):
                    continue
                j = filt.level(t.path.edges[0])
                if filt[j].kind != "fixed":
                    union(i, j)

    roots = {}
    for i in nodes:
        roots.setdefault(find(i), []).append(i)
    classes = [roots[r] for r in sorted(roots)]
    return AlmostInvariantPartition(m, filt, classes)


class AdmissibilityRelation:
    """One linear condition a_r(d_i - d_j) = a_s d_i - a_t d_j."""

    def __init__(self, r, s, t, d_i, d_j, family):
        self.r, self.s, self.t = r, s, t
        self.d_i, self.d_j = d_i, d_j
        self.family = family

    def row(self, M):
        """Coefficient row with this relation written as row . a = 0."""
        row = [0] * M
        row[self.r] += self.d_i - self.d_j
        row[self.s] -= self.d_i
        row[self.t] += self.d_j
        return row

    def __repr__(self):
        return "a_%d(%d - %d) = a_%d*%d - a_%d*%d" % (
            self.r + 1, self.d_i, self.d_j,
            self.s + 1, self.d_i, self.t + 1, self.d_j,
        )


def admissibility_relations(m, part=None, catalog=None):
    """One relation per (quasi-exceptional family, containing class) incidence."""
    if catalog is None:
        catalog = build_catalog(m)
    if part is None:
        part = almost_invariant_subgraphs(m, catalog)
    filt = part.filtration
    rels = []
    seen = set()
    for i, stratum in enumerate(filt):
        if stratum.kind in ("fixed", "zero"):
            continue
        for e in sorted(stratum.edges, key=m.graph.edge_index):
            r = part.class_of_edge(e)
            for t in qe_split(m, m.image(e), catalog).terms:
                if t.kind != TERM_QE:
                    continue
                fam = t.family
                key = (fam.key(), r)
                if key in seen:
                    continue
                seen.add(key)
                rels.append(
                    AdmissibilityRelation(
                        r,
                        part.class_of_edge(fam.e_i),
                        part.class_of_edge(fam.e_j),
                        fam.d_i,
                        fam.d_j,
                        fam,
                    )
                )
    return rels


class AdmissibleLattice:
    """Integer solution lattice L of the admissibility relations in Z^M."""

    def __init__(self, rows, M):
        self.matrix = [list(map(int, r)) for r in rows]
        self.M = M
        basis = kernel_basis(self.matrix, M)
        self.basis = sorted(_orient(v) for v in basis)
        self.rank = len(self.basis)

    @property
    def all_ones(self):
        return (1,) * self.M

    def contains(self, a):
        """Membership in L: a integer tuple annihilated by every relation."""
        if len(a) != self.M or any(not isinstance(x, int) for x in a):
            return False
        return all(sum(c * x for c, x in zip(row, a)) == 0 for row in self.matrix)

    def is_admissible(self, a):
        return self.contains(a) and all(x >= 0 for x in a)

    def __repr__(self):
        return "<lattice rank %d in Z^%d>" % (self.rank, self.M)


def _orient(vec):
    """Flip sign so the first nonzero coordinate is positive."""
    for x in vec:
        if x:
            return tuple(vec) if x > 0 else tuple(-y for y in vec)
    return tuple(vec)


def lattice(rels, M):
    return AdmissibleLattice([rel.row(M) for rel in rels], M)


class Disintegration:
    """Partition, relations and lattice of one map, computed together."""

    def __init__(self, m, catalog=None):
        self.map = m
        self.catalog = catalog if catalog is not None else build_catalog(m)
        self.partition = almost_invariant_subgraphs(m, self.catalog)
        self.relations = admissibility_relations(m, self.partition, self.catalog)
        self.lattice = lattice(self.relations, self.partition.M)

    @property
    def M(self):
        return self.partition.M

    @property
    def rank(self):
        return self.lattice.rank

    def __repr__(self):
        return "<disintegration M=%d, relations=%d, rank=%d>" % (
            self.M, len(self.relations), self.rank,
        )


def disintegrate(m, catalog=None):
    return Disintegration(m, catalog)


def build_fa(m, a, dis=None):
    """The map acting as f^{a_i} on X_i and fixing every f-fixed edge."""
    if dis is None:
        dis = disintegrate(m)
    a = tuple(a)
    if len(a) != dis.M or any(not isinstance(x, int) for x in a):
        raise AdmissibilityError(
            "expected an integer %d-tuple, got %r" % (dis.M, (a,))
        )
    if any(x < 0 for x in a):
        raise AdmissibilityError("tuple has a negative coordinate: %r" % (a,))
    if not dis.lattice.contains(a):
        raise AdmissibilityError("tuple %r violates an admissibility relation" % (a,))
    g = m.graph
    images = {}
    for e in g.edge_names:
        i = dis.partition.class_of_edge(e)
        if i is None:
            images[e] = g.path([e])
        else:
            images[e] = m.iterate(g.path([e]), a[i])
    return GraphMap(g, images, name="f_a%r" % (a,))


def verify_homotopy_equivalence(m):
    """True iff the induced endomorphism of the fundamental group is onto."""
    return map_is_pi1_surjective(m)


def is_generic(m, a, dis=None, catalog=None):
    """All coordinates positive and no two linear-edge twists collide."""
    if dis is None:
        dis = disintegrate(m, catalog)
    if len(a) != dis.M or any(x <= 0 for x in a):
        return False
    for axis in axes(m, dis.catalog):
        for (e_i, d_i), (e_j, d_j) in itertools.combinations(axis.members, 2):
            r = dis.partition.class_of_edge(e_i)
            s = dis.partition.class_of_edge(e_j)
            if a[r] * d_i == a[s] * d_j:
                return False
    return True


def verify_commute(m, a, b, dis=None):
    """Edge-image equality of f_a f_b, f_b f_a and f_{a+b}."""
    if dis is None:
        dis = disintegrate(m)
    fa = build_fa(m, a, dis)
    fb = build_fa(m, b, dis)
    fab = build_fa(m, tuple(x + y for x, y in zip(a, b)), dis)
    for e in m.graph.edge_names:
        target = fab.image(e)
        if fa.apply(fb.image(e)) != target or fb.apply(fa.image(e)) != target:
            return False
    return True


class PreservationReport:
    """Outcome of checking that f_a keeps f's Nielsen and QE structure."""

    def __init__(self, checked_nielsen, checked_qe, failures):
        self.checked_nielsen = checked_nielsen
        self.checked_qe = checked_qe
        self.failures = list(failures)

    @property
    def passed(self):
        return not self.failures

    def lines(self):
        out = [
            "Nielsen paths fixed by f_a: %d checked" % self.checked_nielsen,
            "quasi-exceptional paths mapped by the class power: %d checked"
            % self.checked_qe,
        ]
        out.extend("FAIL: %s" % msg for msg in self.failures)
        return out

    def __str__(self):
        return "\n".join(self.lines())


def verify_nielsen_preserved(m, a, dis=None, qe_powers=(-2, -1, 0, 1, 2)):
    """Check f_a fixes every catalog Nielsen path and maps each incident
    quasi-exceptional family by f^{a_k} for the class X_k it occurs in."""
    if dis is None:
        dis = disintegrate(m)
    fa = build_fa(m, a, dis)
    failures = []
    n_checked = 0
    for sigma in dis.catalog.nielsen_paths():
        n_checked += 1
        if fa.apply(sigma) != sigma:
            failures.append("f_a moves the Nielsen path %r" % (sigma.edges,))

    incidences = {}
    for rel_stratum in dis.partition.filtration:
        if rel_stratum.kind in ("fixed", "zero"):
            continue
        for e in sorted(rel_stratum.edges, key=m.graph.edge_index):
            k = dis.partition.class_of_edge(e)
            for t in qe_split(m, m.image(e), dis.catalog).terms:
                if t.kind == TERM_QE:
                    incidences.setdefault((t.family.key(), k), t.family)
    q_checked = 0
    for (key, k), fam in sorted(incidences.items()):
        for p in qe_powers:
            sigma = fam.member_path(p)
            q_checked += 1
            if fa.apply(sigma) != m.iterate(sigma, a[k]):
                failures.append(
                    "family %s w^* %s', power %d: f_a disagrees with f^%d"
                    % (fam.e_i, fam.e_j, p, a[k])
                )
    return PreservationReport(n_checked, q_checked, failures)


class FaCTResult:
    """check_ct on f_a plus comparison of its structure with f's."""

    def __init__(self, report, same_principal, same_nielsen):
        self.report = report
        self.same_principal = same_principal
        self.same_nielsen = same_nielsen

    @property
    def passed(self):
        return self.report.passed and self.same_principal and self.same_nielsen

    def lines(self):
        out = list(self.report.lines())
        out.append(
            "principal vertices %s"
            % ("unchanged" if self.same_principal else "DIFFER")
        )
        out.append(
            "Nielsen paths within bound %s"
            % ("unchanged" if self.same_nielsen else "DIFFER")
        )
        return out

    def __str__(self):
        return "\n".join(self.lines())


def check_fa_is_ct(m, a, dis=None):
    """Run the full structure check on f_a and compare its principal
    vertices and within-bound Nielsen paths against f's."""
    if dis is None:
        dis = disintegrate(m)
    fa = build_fa(m, a, dis)
    bound = default_length_bound(m)
    report = check_ct(fa, bound=bound)
    same_principal = principal_vertices(fa) == principal_vertices(m)
    cat_f = build_catalog(m, bound=bound)
    cat_fa = build_catalog(fa, bound=bound)
    paths_f = {p.edges for p in cat_f.nielsen_paths()}
    paths_fa = {p.edges for p in cat_fa.nielsen_paths()}
    return FaCTResult(report, same_principal, paths_f == paths_fa)


def nearest_admissible(latt, a):
    """Smallest shift a + k*(1,...,1), k >= 0, into the nonnegative orthant.

    Every relation row annihilates the all-ones tuple, so shifting along it
    never leaves the lattice; returns None when a is not in L at all.
    """
    a = tuple(int(x) for x in a)
    if not latt.contains(a):
        return None
    k = max(0, -min(a)) if a else 0
    return tuple(x + k for x in a)


def _edge_image_candidates(m, edge, target_path, cap=64):
    """Exponents k with f^k(edge) equal to the target path, by iteration.

    Iteration stops once the image outgrows the target or revisits a path.
    """
    g = m.graph
    path = g.path([edge])
    seen = set()
    found = set()
    for k in range(cap + 1):
        if path.edges == target_path.edges:
            found.add(k)
        if path.edges in seen or len(path) > len(target_path):
            break
        seen.add(path.edges)
        path = m.apply(path)
    return found


def find_tuple_representing(m, target, dis=None, cap=64):
    """An admissible tuple a with f_a edge-image-equal to target, or None."""
    if dis is None:
        dis = disintegrate(m)
    g = m.graph
    if set(g.edge_names) != set(target.graph.edge_names):
        return None
    for e in g.edge_names:
        if dis.partition.class_of_edge(e) is None:
            if target.image(e).edges != (e,):
                return None
    per_class = []
    for sub in dis.partition.subgraphs:
        cands = None
        for e in sorted(sub, key=g.edge_index):
            ks = _edge_image_candidates(m, e, target.image(e), cap)
            cands = ks if cands is None else cands & ks
            if not cands:
                return None
        per_class.append(sorted(cands))
    for combo in itertools.islice(itertools.product(*per_class), 10000):
        if not dis.lattice.contains(combo):
            continue
        fa = build_fa(m, combo, dis)
        if all(fa.image(e).edges == target.image(e).edges for e in g.edge_names):
            return tuple(combo)
    return None
