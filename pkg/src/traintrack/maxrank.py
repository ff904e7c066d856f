"""Rank growth along the filtration and the shape of maximal configurations.

Restricting a map to each filtration prefix and disintegrating the
restriction gives a sequence of lattice ranks R_0, R_1, ..., R_N.  The
sequence is not monotone: a new stratum can add a class (rank up) or add a
relation tying old classes together (rank down).  Grouping the strata into
stages whose boundary prefixes have no valence-one vertices, each stage
satisfies the Euler bound

    delta R  <=  2 * delta chi - delta,

where delta is 1 exactly when some vertex of the lower boundary graph
carries a fixed direction into the new strata.  Equality forces the stage
into one of four shapes: a full FPS subgraph with delta 0, a partial FPS
subgraph with delta 1, a single linear edge with delta 1, or a pair of
linear edges hanging from a common new vertex with delta 0.  ("FPS" is a
reminder of the four-punctured sphere, whose mapping class group realizes
the model case.)

This module computes the rank sequence, audits the bound stage by stage,
detects FPS subgraphs clause by clause, and classifies maps whose lattice
attains the maximal rank 2n-3 (or 2n-4 inside the kernel of the homology
action) as a base piece plus a tower of equality stages.  It also builds
the two standard families realizing those maxima on a subdivided rose, and
the vertex-split surgery used to renormalize twisting exponents.
"""

from .disintegrate import disintegrate
from .errors import InputError, InvariantForestError
from .freegroup import homology_class, is_IA
from .maps import GraphMap, classify_strata, direction_map, filtration, restrict
from .nielsen import is_nielsen_path
from .paths import MarkedGraph, base_name, inverse


# -- invariant forests ---------------------------------------------------------


def find_invariant_forest(m):
    """A nontrivial invariant subforest, or None.

    Every invariant subgraph contains the closure of each of its edges
    under "crosses the image of", so if any invariant forest exists then
    some single-edge closure is one.  Returns the edge names of the first
    such closure in construction order.
    """
    g = m.graph
    for seed in g.edge_names:
        todo = {seed}
        seen = set()
        while todo:
            e = todo.pop()
            seen.add(e)
            for x in m.edge_images[e].edges:
                if base_name(x) not in seen:
                    todo.add(base_name(x))
        if seen and g.is_forest(seen):
            return tuple(sorted(seen, key=g.edge_index))
    return None


# -- stratum orders ------------------------------------------------------------


def _supports(m, filt):
    sup = []
    for s in filt:
        need = set()
        for e in s.edges:
            for x in m.edge_images[e].edges:
                need.add(filt.level(x))
        sup.append(need)
    return sup


def valid_orders(m, cap=10000):
    """Generate topologically valid stratum orders, construction order first.

    An order is valid when every stratum comes after all strata its images
    cross.  Enumeration is depth-first in index order, so the original
    order (always valid) is yielded first; at most ``cap`` orders come out.
    """
    filt = filtration(m)
    n = len(filt)
    sup = _supports(m, filt)
    budget = [cap]

    def rec(prefix, placed):
        if budget[0] <= 0:
            return
        if len(prefix) == n:
            budget[0] -= 1
            yield tuple(prefix)
            return
        for i in range(n):
            if i not in placed and all(j in placed or j == i for j in sup[i]):
                placed.add(i)
                prefix.append(i)
                yield from rec(prefix, placed)
                placed.discard(i)
                prefix.pop()

    yield from rec([], set())


def _prefix_edges(filt, order, j):
    out = []
    for p in range(j):
        out.extend(filt[order[p]].edges)
    return out


def _has_valence_one(g, edges):
    deg = {}
    for e in edges:
        deg[g.init(e)] = deg.get(g.init(e), 0) + 1
        deg[g.term(e)] = deg.get(g.term(e), 0) + 1
    return any(d == 1 for d in deg.values())


def _retracts_to(g, sub_edges, base_edges):
    """Does the subgraph deformation retract to the base by pruning hanging
    edges (valence-one vertices outside the base)?"""
    cur = {base_name(e) for e in sub_edges}
    base = {base_name(e) for e in base_edges}
    base_verts = g.incident_vertices(base)
    changed = True
    while changed:
        changed = False
        deg = {}
        for e in cur:
            deg[g.init(e)] = deg.get(g.init(e), 0) + 1
            deg[g.term(e)] = deg.get(g.term(e), 0) + 1
        for e in sorted(cur, key=g.edge_index):
            if e in base:
                continue
            if (deg[g.init(e)] == 1 and g.init(e) not in base_verts) or (
                deg[g.term(e)] == 1 and g.term(e) not in base_verts
            ):
                cur.discard(e)
                changed = True
                break
    return cur == base


# -- rank sequence and stage grouping ------------------------------------------


def stage_ranks(m, order=None):
    """Lattice ranks [R_0, ..., R_N] of the restrictions to filtration
    prefixes; R_j belongs to the union of the first j strata.

    Zero strata on top of a prefix are stripped before disintegrating (they
    carry neither fundamental group nor twisting, and the subgraph decompo-
    sition is only defined once an irreducible stratum sits above them).
    """
    filt = filtration(m)
    order = tuple(order if order is not None else range(len(filt)))
    ranks = [0]
    for j in range(1, len(order) + 1):
        jj = j
        while jj > 0 and filt[order[jj - 1]].kind == "zero":
            jj -= 1
        if jj == 0:
            ranks.append(0)
        elif jj < j:
            ranks.append(ranks[jj])
        else:
            sub = restrict(m, _prefix_edges(filt, order, j))
            ranks.append(disintegrate(sub).lattice.rank)
    return ranks


def default_stage_grouping(m, order=None):
    """Stage boundaries [l_0, l_1, ..., l_K = N] as prefix counts.

    l_0 is the block of bottom strata that are components of their own
    prefix; later boundaries are the prefixes with no valence-one vertices
    whose top stratum is irreducible.
    """
    filt = filtration(m)
    g = m.graph
    order = tuple(order if order is not None else range(len(filt)))
    n = len(order)
    k = 1
    verts = set(g.incident_vertices(filt[order[0]].edges))
    for j in range(1, n):
        edges = filt[order[j]].edges
        vs = g.incident_vertices(edges)
        if vs & verts or g.is_forest(edges):
            break
        verts |= vs
        k = j + 1
    bounds = [k]
    for j in range(k + 1, n + 1):
        if filt[order[j - 1]].kind == "zero":
            continue
        if not _has_valence_one(g, _prefix_edges(filt, order, j)):
            bounds.append(j)
    if bounds[-1] != n:
        bounds.append(n)
    return bounds


def _grouping_is_proper(m, order, grouping):
    """Between boundaries every irreducible prefix must retract to the
    stage floor; a prefix that closes a loop mid-stage invalidates it."""
    filt = filtration(m)
    g = m.graph
    for lo, hi in zip(grouping, grouping[1:]):
        floor = _prefix_edges(filt, order, lo)
        for j in range(lo + 1, hi):
            if filt[order[j - 1]].kind == "zero":
                continue
            if not _retracts_to(g, _prefix_edges(filt, order, j), floor):
                return False
    return True


# -- FPS witnesses ---------------------------------------------------------------


class FPSWitness:
    """Evidence that a stratum window is a (partial or full) FPS subgraph.

    ``l`` is the prefix count below the window, ``strata`` the 1-based
    prefix positions of the window (the last one is the EG stratum).  A
    partial witness has two linear edges and allows lower Nielsen paths in
    EG images; a full witness has three linear edges and does not.
    """

    def __init__(self, kind, l, strata, linear, alphas, eg_edges, shape, chi_drop):
        self.kind = kind
        self.l = l
        self.strata = tuple(strata)
        self.linear = tuple(linear)  # (edge, exponent, hanging vertex)
        self.alphas = tuple(alphas)
        self.eg_edges = tuple(eg_edges)
        self.shape = shape
        self.chi_drop = chi_drop

    def lines(self):
        out = [
            "%s FPS subgraph over G_%d (strata %s)"
            % (self.kind, self.l, "..".join(str(s) for s in (self.strata[0], self.strata[-1]))),
            "  shape: %s on {%s}" % (self.shape, " ".join(self.eg_edges)),
            "  euler drop: %d" % self.chi_drop,
        ]
        for (edge, d, v), alpha in zip(self.linear, self.alphas):
            out.append(
                "  linear %s from %s twisting (%s)^%d"
                % (edge, v, " ".join(alpha.edges), d)
            )
        return out

    def __repr__(self):
        return "<%s FPS strata %s..%s>" % (self.kind, self.strata[0], self.strata[-1])


def _window_shape(g, eg_edges, attach, forbidden_center_verts):
    comps = g.components(eg_edges)
    if len(comps) != 1 or not g.is_forest(eg_edges):
        return None
    vs, _ = comps[0]
    deg = {}
    for e in eg_edges:
        deg[g.init(e)] = deg.get(g.init(e), 0) + 1
        deg[g.term(e)] = deg.get(g.term(e), 0) + 1
    leaves = {v for v in vs if deg[v] == 1}
    branch = {v for v in vs if deg[v] >= 3}
    if not branch:
        if leaves <= attach and attach <= vs:
            return "pair-of-arcs"
        return None
    if len(branch) == 1:
        c = next(iter(branch))
        if deg[c] == 3 and c not in forbidden_center_verts and leaves == attach:
            return "triad"
    return None


def _grammar_ok(m, path, eg_names, lin_strata, allow_low, low_pred):
    """Is the edge path a concatenation of EG edges, twist conjugates
    E.alpha^k.Ebar of the window's linear edges and (when allowed) Nielsen
    paths below the window?"""
    g = m.graph
    linmap = {base_name(s.neg_edge): s for s in lin_strata}
    edges = path.edges
    i = 0
    while i < len(edges):
        e = edges[i]
        b = base_name(e)
        if b in eg_names:
            i += 1
            continue
        if b in linmap:
            st = linmap[b]
            if e != st.neg_edge:
                return False
            fwd = st.axis.edges
            rev = tuple(inverse(x) for x in reversed(fwd))
            step = len(fwd)
            j = i + 1
            while tuple(edges[j : j + step]) in (fwd, rev):
                j += step
            if j == i + 1 or j >= len(edges) or edges[j] != inverse(st.neg_edge):
                return False
            i = j + 1
            continue
        if allow_low and low_pred(e):
            j = i
            while j < len(edges) and low_pred(edges[j]):
                j += 1
            if not is_nielsen_path(m, g.path(edges[i:j])):
                return False
            i = j
            continue
        return False
    return True


def _match_window(m, filt, order, s_pos, count):
    g = m.graph
    if s_pos < count + 1:
        return None
    pos_of = {order[p]: p for p in range(len(order))}
    lin = [filt[order[p]] for p in range(s_pos - count, s_pos)]
    if any(s.kind != "NEG" or not s.linear for s in lin):
        return None
    l_pos = s_pos - count
    gl = _prefix_edges(filt, order, l_pos)
    gl_verts = g.incident_vertices(gl)
    hang = []
    for s in lin:
        for x in s.axis.edges:
            if pos_of[filt.level(x)] >= l_pos:
                return None
        v = g.init(s.neg_edge)
        if v in gl_verts:
            return None
        hang.append(v)
    if len(set(hang)) != count:
        return None
    below = _prefix_edges(filt, order, s_pos)
    if not _retracts_to(g, below, gl):
        return None
    eg = filt[order[s_pos]]
    below_verts = g.incident_vertices(below)
    attach = g.incident_vertices(eg.edges) & below_verts
    if count == 3:
        if attach != set(hang):
            return None
    else:
        extra = attach - set(hang)
        if not (set(hang) <= attach and len(extra) == 1 and extra <= gl_verts):
            return None
    shape = _window_shape(g, set(eg.edges), attach, below_verts)
    if shape is None:
        return None
    low_pred = lambda e: pos_of[filt.level(e)] < l_pos
    for e in eg.edges:
        if not _grammar_ok(m, m.edge_images[e], set(eg.edges), lin, count == 2, low_pred):
            return None
    chi_drop = g.euler_characteristic(gl) - g.euler_characteristic(
        _prefix_edges(filt, order, s_pos + 1)
    )
    return FPSWitness(
        kind="full" if count == 3 else "partial",
        l=l_pos,
        strata=tuple(range(l_pos + 1, s_pos + 2)),
        linear=[(s.neg_edge, s.exponent, g.init(s.neg_edge)) for s in lin],
        alphas=[s.axis for s in lin],
        eg_edges=eg.edges,
        shape=shape,
        chi_drop=chi_drop,
    )


def detect_fps(m, order=None):
    """All partial and full FPS subgraph windows, one witness per EG stratum.

    A window is an EG stratum together with the run of linear edges just
    below it; every clause (linear normal forms over lower Nielsen words,
    distinct hanging vertices, retractability, attachment vertex set,
    arc-pair or triad shape, image grammar) is checked exactly.  For a full
    window the attachment set is read against the graph below the EG
    stratum, which includes the third hanging vertex.
    """
    filt = classify_strata(m)
    order = tuple(order if order is not None else range(len(filt)))
    out = []
    for p in range(len(order)):
        if filt[order[p]].kind != "EG":
            continue
        w = _match_window(m, filt, order, p, 3) or _match_window(m, filt, order, p, 2)
        if w is not None:
            out.append(w)
    return out


# -- the stage audit -------------------------------------------------------------


class StageRecord:
    """One stage of the audit: prefix interval, rank jump and its bound."""

    def __init__(self, lo, hi, strata, delta_r, delta_chi, delta, case, witness, ok):
        self.lo = lo
        self.hi = hi
        self.strata = tuple(strata)
        self.delta_r = delta_r
        self.delta_chi = delta_chi
        self.delta = delta
        self.bound = 2 * delta_chi - delta
        self.equality = delta_r == self.bound
        self.case = case
        self.witness = witness
        self.ok = ok

    def line(self):
        tag = "=" if self.equality else "<"
        case = " case (%s)" % self.case if self.case else ""
        return "G_%d -> G_%d: dR=%d %s 2*%d - %d%s%s" % (
            self.lo,
            self.hi,
            self.delta_r,
            tag,
            self.delta_chi,
            self.delta,
            case,
            "" if self.ok else "  [VIOLATION]",
        )


class RankAudit:
    """Stage-by-stage audit of the Euler rank bound."""

    def __init__(self, m, order, grouping, ranks, stages):
        self.map = m
        self.order = order
        self.grouping = list(grouping)
        self.ranks = list(ranks)
        self.stages = list(stages)

    @property
    def passed(self):
        return all(s.ok for s in self.stages)

    def lines(self):
        out = ["ranks %s" % self.ranks, "stages %s" % self.grouping]
        out.extend("  " + s.line() for s in self.stages)
        out.append("audit %s" % ("passed" if self.passed else "FAILED"))
        return out


def _stage_delta(m, dmap, floor_verts, window_edges):
    g = m.graph
    for e in window_edges:
        for d in (e, inverse(e)):
            if g.init(d) in floor_verts and dmap.is_fixed(d):
                return 1
    return 0


def rank_audit(m, grouping=None, order=None):
    """Audit delta R <= 2 delta chi - delta over the stage grouping.

    Equality stages are tagged with the shape that explains them: (a) full
    FPS with delta 0, (b) partial FPS with delta 1, (c) a single linear
    edge with delta 1, (d) a pair of linear edges hanging from a common new
    vertex with delta 0.  An equality stage matching no shape, or a stage
    breaking the bound, fails the audit: for a verified train track map
    that indicates an invalid input.
    """
    filt = classify_strata(m)
    g = m.graph
    order = tuple(order if order is not None else range(len(filt)))
    grouping = list(grouping) if grouping is not None else default_stage_grouping(m, order)
    ranks = stage_ranks(m, order)
    dmap = direction_map(m)
    witnesses = {(w.l, w.strata[-1]): w for w in detect_fps(m, order)}
    stages = []
    for lo, hi in zip(grouping, grouping[1:]):
        window = [filt[order[p]] for p in range(lo, hi)]
        wedges = [e for s in window for e in s.edges]
        floor_edges = _prefix_edges(filt, order, lo)
        floor_verts = g.incident_vertices(floor_edges)
        delta = _stage_delta(m, dmap, floor_verts, wedges)
        delta_chi = g.euler_characteristic(floor_edges) - g.euler_characteristic(
            _prefix_edges(filt, order, hi)
        )
        delta_r = ranks[hi] - ranks[lo]
        shape = None
        witness = witnesses.get((lo, hi))
        if witness is not None and witness.kind == "full" and delta == 0:
            shape = "a"
        elif witness is not None and witness.kind == "partial" and delta == 1:
            shape = "b"
        elif len(window) == 1 and window[0].kind == "NEG" and window[0].linear and delta == 1:
            shape = "c"
        elif (
            len(window) == 2
            and all(s.kind == "NEG" and s.linear for s in window)
            and delta == 0
        ):
            v0, v1 = (g.init(s.neg_edge) for s in window)
            if v0 == v1 and v0 not in floor_verts:
                shape = "d"
        bound = 2 * delta_chi - delta
        equality = delta_r == bound
        case = shape if equality else None
        ok = delta_r <= bound and (not equality or case is not None)
        stages.append(
            StageRecord(
                lo, hi, [order[p] for p in range(lo, hi)],
                delta_r, delta_chi, delta, case, witness, ok,
            )
        )
    return RankAudit(m, order, grouping, ranks, stages)


# -- classification of maximal rank ----------------------------------------------


class MaxRankReport:
    """Outcome of matching a map against the maximal-rank decompositions."""

    def __init__(self, mode, n, target, rank, ia, matched, base, stages,
                 grouping, order, obstruction, inconclusive):
        self.mode = mode
        self.n = n
        self.target = target
        self.rank = rank
        self.ia = ia
        self.matched = matched
        self.base = base
        self.stages = list(stages)
        self.grouping = grouping
        self.order = order
        self.obstruction = obstruction
        self.inconclusive = inconclusive

    @property
    def ok(self):
        return self.matched and self.rank == self.target

    def lines(self):
        out = [
            "mode %s: rank(L)=%d, maximal target %d (n=%d)%s"
            % (self.mode, self.rank, self.target, self.n,
               ", homology action trivial" if self.ia else "")
        ]
        if self.matched:
            out.append("base: %s" % (self.base,))
            for st in self.stages:
                out.append("stage: %s" % (st,))
            if self.order is not None and list(self.order) != sorted(self.order):
                out.append("strata reordered: %s" % (self.order,))
        else:
            out.append("not maximal: %s" % self.obstruction)
            if self.inconclusive:
                out.append("(structure search hit the reordering cap; inconclusive)")
        return out


def _base_match(m, filt, order, grouping, mode, witnesses):
    """Match the bottom of the decomposition; returns (desc, stages_from) or None."""
    g = m.graph
    l0 = grouping[0]
    if mode == "ia":
        if len(grouping) < 2 or grouping[0] != 1 or grouping[1] != 2:
            return None
        s0, s1 = filt[order[0]], filt[order[1]]
        edges = _prefix_edges(filt, order, 2)
        if (
            s0.kind == "fixed"
            and s1.kind == "fixed"
            and len(g.components(edges)) == 1
            and g.rank(edges) == 2
        ):
            return ("A", "rank-two fixed subgraph"), 1
        return None
    if l0 == 1 and filt[order[0]].kind == "EG" and g.rank(_prefix_edges(filt, order, 1)) == 2:
        return ("A", 1), 0
    if len(grouping) >= 2 and l0 == 1 and grouping[1] == 2:
        s0, s1 = filt[order[0]], filt[order[1]]
        if (
            s0.kind == "fixed"
            and len(s0.edges) == 1
            and s1.kind == "NEG"
            and s1.linear
            and len(s1.axis.edges) == 1
            and base_name(s1.axis.edges[0]) == s0.edges[0]
        ):
            return ("A", 2), 1
    if len(grouping) >= 2 and l0 == 1:
        s0 = filt[order[0]]
        w = witnesses.get((1, grouping[1]))
        if (
            s0.kind == "fixed"
            and len(s0.edges) == 1
            and g.is_loop(s0.edges[0])
            and w is not None
            and w.kind == "partial"
            and g.rank(_prefix_edges(filt, order, grouping[1])) == 3
        ):
            return ("A", 3), 1
    return None


def _axes_homologically_trivial(paths):
    return all(all(c == 0 for c in homology_class(p)) for p in paths)


def _match_structure(m, mode, order):
    filt = classify_strata(m)
    g = m.graph
    grouping = default_stage_grouping(m, order)
    if not _grouping_is_proper(m, order, grouping):
        return "no proper stage grouping for this stratum order"
    witnesses = {(w.l, w.strata[-1]): w for w in detect_fps(m, order)}
    base = _base_match(m, filt, order, grouping, mode, witnesses)
    if base is None:
        return "bottom of the filtration matches no base case"
    desc, consumed = base
    stages = []
    for lo, hi in zip(grouping[consumed:], grouping[consumed + 1:]):
        window = [filt[order[p]] for p in range(lo, hi)]
        floor_verts = g.incident_vertices(_prefix_edges(filt, order, lo))
        if (
            len(window) == 2
            and all(s.kind == "NEG" and s.linear for s in window)
            and g.init(window[0].neg_edge) == g.init(window[1].neg_edge)
            and g.init(window[0].neg_edge) not in floor_verts
        ):
            if mode == "ia" and not _axes_homologically_trivial([s.axis for s in window]):
                return "stage G_%d..G_%d: linear pair with homologically nontrivial axis" % (lo, hi)
            stages.append(("B", 1, tuple(s.neg_edge for s in window)))
            continue
        w = witnesses.get((lo, hi))
        if w is not None and w.kind == "full":
            if mode == "ia" and not _axes_homologically_trivial(w.alphas):
                return "stage G_%d..G_%d: FPS subgraph with homologically nontrivial axis" % (lo, hi)
            stages.append(("B", 2, w))
            continue
        return "stage G_%d..G_%d matches neither a linear pair nor an FPS subgraph" % (lo, hi)
    return desc, stages, grouping


def classify_max_rank(m, mode="general"):
    """Match a maximal-rank map against the base-plus-stages decompositions.

    ``mode`` "general" targets lattice rank 2n-3; "ia" targets 2n-4 and
    requires the homology action to be trivial.  The map must carry no
    nontrivial invariant forest (collapse those first).  When the default
    stratum order does not exhibit the decomposition, valid reorderings are
    searched (up to 10**4); running out is reported as inconclusive rather
    than as a refusal.
    """
    mode = mode.lower()
    if mode not in ("general", "ia"):
        raise InputError("mode must be 'general' or 'ia', not %r" % mode)
    forest = find_invariant_forest(m)
    if forest is not None:
        raise InvariantForestError(
            "nontrivial invariant forest {%s}; collapse it before classifying"
            % " ".join(forest)
        )
    g = m.graph
    n = g.rank()
    target = 2 * n - 3 if mode == "general" else 2 * n - 4
    dis = disintegrate(m)
    rank = dis.lattice.rank
    ia = is_IA(m)

    def report(matched, base=None, stages=(), grouping=None, order=None,
               obstruction=None, inconclusive=False):
        return MaxRankReport(mode, n, target, rank, ia, matched, base, stages,
                             grouping, order, obstruction, inconclusive)

    if rank != target:
        return report(False, obstruction="rank(L) is %d, not %d" % (rank, target))
    if mode == "ia" and not ia:
        return report(False, obstruction="the map acts nontrivially on homology")

    first_fail = None
    tried = 0
    cap = 10**4
    for order in valid_orders(m, cap=cap):
        tried += 1
        res = _match_structure(m, mode, order)
        if isinstance(res, str):
            if first_fail is None:
                first_fail = res
            continue
        base, stages, grouping = res
        return report(True, base=base, stages=stages, grouping=grouping, order=order)
    return report(
        False,
        obstruction=first_fail or "no valid stratum order",
        inconclusive=tried >= cap,
    )


# -- the two standard maximal families -------------------------------------------


class TwistFamily:
    """A subdivided rose together with commuting single-twist generators
    and one generic member with pairwise distinct twisting exponents."""

    def __init__(self, kind, n, graph, generators, generic, word=None):
        self.kind = kind
        self.n = n
        self.graph = graph
        self.generators = tuple(generators)
        self.generic = generic
        self.word = word

    def __repr__(self):
        return "<type %s family n=%d, %d generators>" % (
            self.kind,
            self.n,
            len(self.generators),
        )


def _family_graph(n):
    vertices = ["v%d" % k for k in range(1, n)]
    edges = [("E1", "v1", "v1"), ("E2", "v1", "v1")]
    for k in range(2, n):
        edges.append(("E%d" % (2 * k - 1), "v%d" % k, "v1"))
        edges.append(("E%d" % (2 * k), "v%d" % k, "v1"))
    return MarkedGraph(vertices, edges)


def _identity_images(g):
    return {e: g.path([e]) for e in g.edge_names}


def gen_type_e(n):
    """The rank-(2n-3) twist family on a rose with n-2 subdivided petals.

    E1 and E2 are petals at the central vertex; each subdivided petal
    contributes a pair of edges hanging from its midpoint.  Generator i
    twists E_(i+1) once around E1; the generic member twists E_j by
    E1^(j-1), so all exponents are distinct and the lattice has full rank.
    """
    if n < 3:
        raise InputError("the twist family needs n >= 3, got %d" % n)
    g = _family_graph(n)
    gens = []
    for i in range(1, 2 * n - 2):
        imgs = _identity_images(g)
        name = "E%d" % (i + 1)
        imgs[name] = g.path([name, "E1"])
        gens.append(GraphMap(g, imgs, name="eta_%d" % i))
    imgs = _identity_images(g)
    for j in range(2, 2 * n - 1):
        name = "E%d" % j
        imgs[name] = g.path([name] + ["E1"] * (j - 1))
    generic = GraphMap(g, imgs, name="type_e_generic")
    return TwistFamily("E", n, g, gens, generic)


def gen_type_c(n, w=None):
    """The rank-(2n-4) homologically trivial twist family, n >= 4.

    Same graph as the type E family; the twisting word ``w`` (a closed
    edge path at the central vertex using only E1 and E2, trivial in
    homology, default the commutator E1 E2 E1' E2') twists every
    subdivided-petal edge.  All members act trivially on homology.
    """
    if n < 4:
        raise InputError("the homologically trivial family needs n >= 4, got %d" % n)
    g = _family_graph(n)
    word = list(w) if w is not None else ["E1", "E2", "E1'", "E2'"]
    for x in word:
        if base_name(x) not in ("E1", "E2"):
            raise InputError("twisting word must use only E1 and E2, got %r" % x)
    path = g.tighten(word, base="v1")
    if path.is_trivial():
        raise InputError("twisting word is trivial")
    if path.start != "v1" or path.end != "v1":
        raise InputError("twisting word must be a closed path at v1")
    for name in ("E1", "E2"):
        signed = sum(+1 if x == name else -1 if x == name + "'" else 0 for x in path.edges)
        if signed != 0:
            raise InputError(
                "twisting word is not homologically trivial: net %s count is %d"
                % (name, signed)
            )
    gens = []
    for i in range(1, 2 * n - 3):
        imgs = _identity_images(g)
        name = "E%d" % (i + 2)
        imgs[name] = g.path([name]).concat(path)
        gens.append(GraphMap(g, imgs, name="mu_%d" % i))
    imgs = _identity_images(g)
    for i in range(1, 2 * n - 3):
        name = "E%d" % (i + 2)
        imgs[name] = g.path([name]).concat(path.power(i))
    generic = GraphMap(g, imgs, name="type_c_generic")
    return TwistFamily("C", n, g, gens, generic, word=path)


# -- vertex-split surgery ---------------------------------------------------------


def split_twist_vertex(m, pivot, new_edge="E0", new_vertex="vsplit"):
    """Shift every twisting exponent on the pivot's axis by the pivot's.

    The axis vertex is split in two: the axis loop stays at the old vertex,
    every linear edge over that axis now terminates at the new vertex, and
    a new fixed edge joins the two.  Twisting suffixes become conjugates
    through the new edge with exponents d_k - d_pivot, so the pivot itself
    comes out fixed.  The result represents the same outer class as the
    input but deliberately carries an invariant forest (the pivot arc), the
    configuration the classifier refuses; callers collapse it or use the
    surgery to move a fixed direction onto the bottom stage.
    """
    filt = classify_strata(m)
    g = m.graph
    lin = {}
    pivot_st = None
    for s in filt:
        if s.kind == "NEG" and s.linear:
            lin[base_name(s.neg_edge)] = s
            if base_name(s.neg_edge) == base_name(pivot):
                pivot_st = s
    if pivot_st is None:
        raise InputError("pivot %r is not a linear edge" % pivot)
    axis = pivot_st.axis
    if len(axis.edges) != 1:
        raise InputError("the surgery needs a single-edge axis loop")
    axis_edge = axis.edges[0]
    v = g.init(axis_edge)
    movers = {
        e: s
        for e, s in lin.items()
        if s.axis.edges in (axis.edges, axis.reverse().edges) and g.term(s.neg_edge) == v
    }
    d2 = pivot_st.exponent
    if new_edge in g.edge_names or new_vertex in g.vertices:
        raise InputError("fresh edge and vertex names are taken")

    def new_ends(e):
        i, t = g.init(e), g.term(e)
        if e in movers:
            s = movers[e]
            if s.neg_edge == e:
                t = new_vertex
            else:
                i = new_vertex
        return i, t

    g2 = MarkedGraph(
        list(g.vertices) + [new_vertex],
        [(e,) + new_ends(e) for e in g.edge_names] + [(new_edge, new_vertex, v)],
    )

    def lift(edges):
        out = []
        cur = None
        for e in edges:
            if cur is not None and g2.init(e) != cur:
                out.append(new_edge if g2.init(e) == v else inverse(new_edge))
            out.append(e)
            cur = g2.term(e)
        return g2.tighten(out)

    def axis_power(p):
        return [axis_edge] * p if p >= 0 else [inverse(axis_edge)] * (-p)

    images = {new_edge: g2.path([new_edge])}
    for e in g.edge_names:
        if e in movers:
            s = movers[e]
            shift = s.exponent - d2
            if s.neg_edge == e:
                seq = [e, new_edge] + axis_power(shift) + [inverse(new_edge)]
            else:
                seq = [new_edge] + axis_power(-shift) + [inverse(new_edge), e]
            images[e] = g2.tighten(seq)
        else:
            images[e] = lift(m.edge_images[e].edges)
    return GraphMap(g2, images, name="split_%s" % (m.name or "map"))
