"""Verification of the completely split train track structure.

A topological representative is accepted when it satisfies the clause list

    (R)   forward rotationless,
    (V)   attaching vertices principal and fixed,
    (NEG) non-fixed NEG strata in normal form f(E) = E.u with principal
          initial vertex,
    (L)   linear edges over a common axis carry one word and distinct
          exponents,
    (N)   periodic Nielsen paths have period one; at most one indivisible
          Nielsen path per EG stratum; those of non-EG height have the
          shape E w^k Ebar over a linear stratum,
    (Per) non-trivial components of the periodic subgraph are pointwise
          fixed sets of principal vertices,
    (Z)   zero strata are exactly the contractible filtration components,
          are enveloped by EG strata, map by immersions, and leave no
          low-valence vertices behind,
    (CS)  images of edges in irreducible strata and of connecting paths in
          zero strata are completely split.

Quantification over Nielsen paths is relative to the finite catalog, which
is exhaustive only up to its length and period bounds; every report carries
a caveat line recording this.  Direction and vertex periodicity are exact.
"""

from .maps import classify_strata, direction_map, filtration
from .nielsen import axes, build_catalog, complete_split
from .errors import LViolation, NotCompletelySplit
from .paths import base_name, inverse, word_root


class Clause:
    """Verdict for one named condition with human-readable evidence."""

    def __init__(self, key, failures, witnesses=()):
        self.key = key
        self.failures = list(failures)
        self.witnesses = list(witnesses)

    @property
    def passed(self):
        return not self.failures

    def __repr__(self):
        return "<clause %s %s>" % (self.key, "pass" if self.passed else "FAIL")


class CTReport:
    """Clause-by-clause verdicts; passes only when every clause holds."""

    CLAUSE_ORDER = ("R", "V", "NEG", "L", "N", "Per", "Z", "CS")

    def __init__(self, m, clauses, caveats):
        self.map = m
        self.clauses = clauses
        self.caveats = list(caveats)

    @property
    def passed(self):
        return all(c.passed for c in self.clauses.values())

    def clause(self, key):
        return self.clauses[key]

    def lines(self):
        out = []
        for key in self.CLAUSE_ORDER:
            c = self.clauses[key]
            out.append("(%s) %s" % (key, "pass" if c.passed else "FAIL"))
            for w in c.failures:
                out.append("    " + w)
        for note in self.caveats:
            out.append("note: " + note)
        return out

    def __str__(self):
        return "\n".join(self.lines())


# -- periodicity ---------------------------------------------------------------


def vertex_period(m, v):
    """Exact period of a vertex under the vertex map; 0 when pre-periodic."""
    seen = {v}
    x = m.vertex_map[v]
    k = 1
    while x != v:
        if x in seen:
            return 0
        seen.add(x)
        x = m.vertex_map[x]
        k += 1
    return k


def periodic_vertices(m):
    return [v for v in m.graph.vertices if vertex_period(m, v) >= 1]


def edge_period(m, e):
    """Period of an edge whose whole orbit consists of single edges; else 0.

    An edge with f^k(E) = E (as oriented edges, allowing an orientation
    flip along the way) is pointwise periodic, so it lies in the periodic
    subgraph.
    """
    seen = set()
    x = e
    k = 0
    while True:
        img = m.image(x)
        if len(img) != 1:
            return 0
        x = img.edges[0]
        k += 1
        if x == e:
            return k
        if x in seen:
            return 0
        seen.add(x)


def periodic_subgraph(m):
    """Edge names spanning the non-trivial part of the periodic set."""
    return [e for e in m.graph.edge_names if edge_period(m, e) >= 1]


def _subset_valence(g, v, edges):
    names = {base_name(e) for e in edges}
    return sum(1 for d in g.directions(v) if base_name(d) in names)


def nielsen_classes(m, catalog=None):
    """Partition of the periodic vertices into within-bound Nielsen classes.

    Two periodic vertices fall in one class when a catalog (periodic)
    Nielsen path, a fixed edge or a periodically permuted edge runs
    between them.  Completeness is inherited from the catalog bound.
    """
    cat = catalog if catalog is not None else build_catalog(m)
    g = m.graph
    order = {v: i for i, v in enumerate(g.vertices)}
    parent = {v: v for v in periodic_vertices(m)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if order[rb] < order[ra]:
                ra, rb = rb, ra
            parent[rb] = ra

    for e in periodic_subgraph(m):
        union(g.init(e), g.term(e))
    for entry in list(cat.entries) + list(cat.periodic):
        p = entry.path
        if p.start in parent and p.end in parent:
            union(p.start, p.end)
    classes = {}
    for v in parent:
        classes.setdefault(find(v), set()).add(v)
    return [frozenset(c) for _, c in sorted(
        (order[root], members) for root, members in classes.items())]


def principal_vertices(m, catalog=None):
    """Periodic vertices that are principal.

    A periodic vertex is principal unless it is alone in its Nielsen class
    with exactly two periodic directions lying in one EG stratum, or it
    sits on a circle component of the periodic subgraph all of whose
    vertices have exactly two periodic directions.
    """
    cat = catalog if catalog is not None else build_catalog(m)
    g = m.graph
    dm = direction_map(m)
    filt = filtration(m)
    class_of = {}
    for cls in nielsen_classes(m, cat):
        for v in cls:
            class_of[v] = cls
    circles = []
    for vs, es in g.components(periodic_subgraph(m)):
        if len(es) == len(vs) and all(
            _subset_valence(g, v, es) == 2 for v in vs
        ):
            circles.append(vs)
    out = []
    for v in g.vertices:
        if vertex_period(m, v) < 1:
            continue
        pdirs = dm.periodic_directions(v)
        if len(class_of[v]) == 1 and len(pdirs) == 2:
            levels = {filt.level(d) for d, _ in pdirs}
            if len(levels) == 1 and filt[levels.pop()].kind == "EG":
                continue
        if any(
            v in vs
            and all(len(dm.periodic_directions(w)) == 2 for w in vs)
            for vs in circles
        ):
            continue
        out.append(v)
    return out


def check_forward_rotationless(m, catalog=None):
    """(ok, lines): principal vertices and their periodic directions fixed.

    Endpoints of indivisible periodic Nielsen paths are vertices by
    construction in this edge-path model, so that part of the definition
    holds automatically; the report says so.
    """
    cat = catalog if catalog is not None else build_catalog(m)
    dm = direction_map(m)
    lines = []
    ok = True
    for v in principal_vertices(m, cat):
        p = vertex_period(m, v)
        if p != 1:
            ok = False
            lines.append("principal vertex %s has period %d" % (v, p))
        for d, k in dm.periodic_directions(v):
            if k != 1:
                ok = False
                lines.append(
                    "periodic direction %s at principal vertex %s has period %d"
                    % (d, v, k)
                )
    lines.append(
        "endpoints of periodic Nielsen paths are vertices by construction"
    )
    return ok, lines


# -- connecting paths ----------------------------------------------------------


def _tree_path(g, edges, u, v):
    """Tight path from u to v inside an edge subset, or None."""
    allowed = {base_name(e) for e in edges}
    prev = {u: None}
    queue = [u]
    while queue:
        x = queue.pop(0)
        if x == v:
            break
        for d in g.directions(x):
            if base_name(d) not in allowed:
                continue
            y = g.term(d)
            if y not in prev:
                prev[y] = (x, d)
                queue.append(y)
    if v not in prev:
        return None
    steps = []
    x = v
    while prev[x] is not None:
        x, d = prev[x]
        steps.append(d)
    return g.path(reversed(steps), base=u)


def connecting_paths(m, stratum_index, filt=None):
    """Paths in a zero stratum between vertices that meet EG strata.

    The zero stratum components are trees, so each pair of anchor
    vertices in one component is joined by a unique tight path.
    """
    filt = filt if filt is not None else filtration(m)
    s = filt[stratum_index]
    g = m.graph
    eg_edges = set()
    for t in filt:
        if t.kind == "EG":
            eg_edges.update(t.edges)
    anchors = g.incident_vertices(eg_edges) & g.incident_vertices(s.edges)
    order = {v: i for i, v in enumerate(g.vertices)}
    anchors = sorted(anchors, key=order.get)
    out = []
    for i in range(len(anchors)):
        for j in range(i + 1, len(anchors)):
            p = _tree_path(g, s.edges, anchors[i], anchors[j])
            if p is not None and len(p):
                out.append(p)
    return out


# -- the clause checks ---------------------------------------------------------


def _attaching_vertices(g, filt):
    """v -> (r, s) for vertices in a non-contractible component of some
    prefix G_r that also bound an edge of a higher stratum."""
    out = {}
    for r in range(1, len(filt)):
        noncontract = set()
        for vs, es in g.components(filt.prefix_edges(r)):
            if len(es) >= len(vs):
                noncontract |= vs
        if not noncontract:
            continue
        for s in range(r, len(filt)):
            for e in filt[s].edges:
                for v in (g.init(e), g.term(e)):
                    if v in noncontract and v not in out:
                        out[v] = (r, s)
    return out


def _clause_v(m, filt, principal):
    g = m.graph
    failures = []
    attach = _attaching_vertices(g, filt)
    for v in sorted(attach, key=list(g.vertices).index):
        r, s = attach[v]
        if v not in principal:
            failures.append(
                "attaching vertex %s (prefix %d, stratum %d) is not principal"
                % (v, r, s)
            )
        elif m.vertex_map[v] != v:
            failures.append("attaching vertex %s is not fixed" % v)
    return Clause("V", failures, ["%d attaching vertices" % len(attach)])


def _clause_neg(m, filt, principal):
    g = m.graph
    failures = []
    count = 0
    for i, s in enumerate(filt):
        if s.kind != "NEG":
            continue
        count += 1
        if s.neg_edge is None:
            failures.append(
                "NEG stratum %d {%s} has no f(E) = E.u normal form"
                % (i, " ".join(s.edges))
            )
            continue
        u = s.neg_suffix
        if not len(u):
            failures.append("NEG stratum %d has a trivial suffix" % i)
            continue
        if not u.is_closed():
            failures.append("suffix of NEG edge %s is not closed" % s.neg_edge)
        if filt.height(u) >= i:
            failures.append(
                "suffix of NEG edge %s is not contained below its stratum"
                % s.neg_edge
            )
        if g.init(s.neg_edge) not in principal:
            failures.append(
                "initial vertex %s of NEG edge %s is not principal"
                % (g.init(s.neg_edge), s.neg_edge)
            )
    return Clause("NEG", failures, ["%d NEG strata" % count])


def _clause_l(m, cat):
    try:
        axs = axes(m, cat)
    except LViolation as exc:
        return Clause("L", [str(exc)])
    witnesses = []
    for ax in axs:
        witnesses.append(
            "axis %s: %s"
            % (
                " ".join(ax.word.edges),
                ", ".join("%s^%d" % (e, d) for e, d in ax.members),
            )
        )
    return Clause("L", [], witnesses)


def _linear_inp_shape(s, sigma):
    """Does sigma read E w^k Ebar over the linear stratum s (either way)?"""
    e = s.neg_edge
    for cand in (sigma, sigma.reverse()):
        if len(cand) < 3:
            continue
        if cand.edges[0] != e or cand.edges[-1] != inverse(e):
            continue
        root, _ = word_root(cand.edges[1:-1])
        if tuple(root) in (s.axis.edges, s.axis.reverse().edges):
            return True
    return False


def _clause_n(m, filt, cat):
    failures = []
    for entry in cat.periodic:
        failures.append(
            "Nielsen path %s has period %d"
            % (" ".join(entry.path.edges), entry.period)
        )
    by_height = {}
    for entry in cat.inps():
        by_height.setdefault(entry.height, []).append(entry)
    for r in sorted(by_height):
        entries = by_height[r]
        kind = filt[r].kind
        if kind == "EG":
            if len(entries) > 1:
                failures.append(
                    "EG stratum %d carries %d indivisible Nielsen paths"
                    % (r, len(entries))
                )
            continue
        for entry in entries:
            text = " ".join(entry.path.edges)
            if kind != "NEG" or not filt[r].linear:
                failures.append(
                    "indivisible Nielsen path %s has height %d in a "
                    "non-linear %s stratum" % (text, r, kind)
                )
            elif not _linear_inp_shape(filt[r], entry.path):
                failures.append(
                    "indivisible Nielsen path %s of linear height %d does "
                    "not read E w^k Ebar" % (text, r)
                )
    return Clause(
        "N", failures, ["%d indivisible Nielsen paths" % len(cat.inps())]
    )


def _clause_per(m, filt, principal):
    g = m.graph
    order = {v: i for i, v in enumerate(g.vertices)}
    failures = []
    comps = g.components(periodic_subgraph(m))
    for vs, es in comps:
        label = " ".join(sorted(es))
        for v in sorted(vs, key=order.get):
            if v not in principal:
                failures.append(
                    "vertex %s of periodic component {%s} is not principal"
                    % (v, label)
                )
            if m.vertex_map[v] != v:
                failures.append(
                    "vertex %s of periodic component {%s} is not fixed"
                    % (v, label)
                )
        for e in sorted(es):
            if m.edge_images[e].edges != (e,):
                failures.append(
                    "edge %s of periodic component {%s} is not pointwise fixed"
                    % (e, label)
                )
        if len(es) == len(vs) - 1:
            for r in sorted({filt.level(e) for e in es}):
                below = filt.prefix_edges(r)
                if not any(
                    _subset_valence(g, v, below) >= 2 for v in vs
                ):
                    failures.append(
                        "contractible periodic component {%s} meets stratum "
                        "%d but no vertex has valence >= 2 below it"
                        % (label, r)
                    )
    return Clause(
        "Per", failures, ["%d non-trivial periodic components" % len(comps)]
    )


def _clause_z(m, filt):
    g = m.graph
    dm = direction_map(m)
    failures = []
    for i, s in enumerate(filt):
        stratum_edges = set(s.edges)
        comps = [
            (vs, es)
            for vs, es in g.components(filt.prefix_edges(i + 1))
            if es & stratum_edges
        ]
        if s.kind == "zero":
            for vs, es in comps:
                if not es <= stratum_edges:
                    failures.append(
                        "zero stratum %d shares a filtration component with "
                        "lower edges {%s}" % (i, " ".join(sorted(es - stratum_edges)))
                    )
                elif len(es) != len(vs) - 1:
                    failures.append(
                        "zero stratum %d has a non-contractible component" % i
                    )
        else:
            for vs, es in comps:
                if es <= stratum_edges and len(es) == len(vs) - 1:
                    failures.append(
                        "%s stratum %d is a contractible component of its "
                        "filtration level but is not a zero stratum"
                        % (s.kind, i)
                    )
    for i, s in enumerate(filt):
        if s.kind != "zero":
            continue
        j = next(
            (j for j in range(i + 1, len(filt)) if filt[j].kind != "zero"),
            None,
        )
        if j is None:
            failures.append("zero stratum %d has no irreducible stratum above" % i)
        elif filt[j].kind != "EG":
            failures.append(
                "first irreducible stratum %d above zero stratum %d is %s, "
                "not EG" % (j, i, filt[j].kind)
            )
        else:
            for vs, es in g.components(filt.prefix_edges(j + 1)):
                if len(es) < len(vs):
                    failures.append(
                        "prefix through stratum %d has a contractible "
                        "component above zero stratum %d" % (j, i)
                    )
        for e in s.edges:
            if not len(m.edge_images[e]):
                failures.append("zero stratum edge %s is collapsed" % e)
        for v in sorted(g.incident_vertices(s.edges)):
            ds = [d for d in g.directions(v) if base_name(d) in set(s.edges)]
            for a in range(len(ds)):
                for b in range(a + 1, len(ds)):
                    if dm.map[ds[a]] == dm.map[ds[b]]:
                        failures.append(
                            "restriction to zero stratum %d is not an "
                            "immersion: Df folds %s and %s at %s"
                            % (i, ds[a], ds[b], v)
                        )
    for v in g.vertices:
        ds = g.directions(v)
        if not ds:
            continue
        levels = {filt.level(d) for d in ds}
        if len(levels) == 1 and filt[next(iter(levels))].kind == "zero":
            if len(ds) < 3:
                failures.append(
                    "link of %s lies in zero stratum %d but its valence is %d"
                    % (v, levels.pop(), len(ds))
                )
    return Clause("Z", failures)


def _cert_rank(cert):
    return 0 if cert == "legal-turns" else 1


def _clause_cs(m, filt, cat, split_depth):
    try:
        return _split_images(m, filt, cat, split_depth)
    except LViolation as exc:
        return Clause("CS", ["splittings not evaluated: %s" % exc])


def _split_images(m, filt, cat, split_depth):
    failures = []
    worst = "legal-turns"
    checked = 0
    for i, s in enumerate(filt):
        if s.kind == "zero":
            continue
        for e in s.edges:
            checked += 1
            try:
                sp = complete_split(m, m.image(e), cat, k_max=split_depth)
            except NotCompletelySplit as exc:
                failures.append("f(%s) is not completely split: %s" % (e, exc))
                continue
            if _cert_rank(sp.certificate) > _cert_rank(worst):
                worst = sp.certificate
    for i, s in enumerate(filt):
        if s.kind != "zero":
            continue
        for sigma in connecting_paths(m, i, filt):
            checked += 1
            text = " ".join(sigma.edges)
            img = m.apply(sigma)
            if len(img) != sum(len(m.image(e)) for e in sigma.edges):
                failures.append(
                    "restriction to connecting path %s is not an immersion"
                    % text
                )
                continue
            try:
                sp = complete_split(m, img, cat, k_max=split_depth)
            except NotCompletelySplit as exc:
                failures.append(
                    "image of connecting path %s is not completely split: %s"
                    % (text, exc)
                )
                continue
            if _cert_rank(sp.certificate) > _cert_rank(worst):
                worst = sp.certificate
    return Clause(
        "CS",
        failures,
        ["%d images completely split, certificate %s" % (checked, worst)],
    )


def check_ct(m, catalog=None, bound=None, split_depth=4):
    """Full structural report; raises InconsistentFiltration when the map
    does not respect any maximal filtration at all."""
    cat = catalog if catalog is not None else build_catalog(m, bound)
    filt = classify_strata(m, cat)
    principal = set(principal_vertices(m, cat))
    rot_ok, rot_lines = check_forward_rotationless(m, cat)
    clauses = {
        "R": Clause("R", [] if rot_ok else rot_lines[:-1], [rot_lines[-1]]),
        "V": _clause_v(m, filt, principal),
        "NEG": _clause_neg(m, filt, principal),
        "L": _clause_l(m, cat),
        "N": _clause_n(m, filt, cat),
        "Per": _clause_per(m, filt, principal),
        "Z": _clause_z(m, filt),
        "CS": _clause_cs(m, filt, cat, split_depth),
    }
    caveats = [
        "Nielsen-path quantifiers searched to length %d and period %d"
        % (cat.bound, cat.period_bound),
        "endpoints of periodic Nielsen paths are vertices by construction",
    ]
    return CTReport(m, clauses, caveats)
