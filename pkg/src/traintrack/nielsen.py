"""Nielsen paths, linear edges, axes, quasi-exceptional families, splittings.

A Nielsen path is a nontrivial path sigma with f_#(sigma) = sigma.  Every
Nielsen path has the shape p . reverse(q) where p and q are "stable
prefixes": paths starting with a fixed direction such that f_#(p) = p.s and
f_#(q) = q.s with one common suffix s (the cancellation at the unique
folding point removes s.reverse(s) and nothing else).  The catalog search
therefore enumerates stable prefixes along the rays developed by iterating
f on fixed directions and pairs them up.  The search is exhaustive up to
the length bound; the catalog records the bound and makes no claim beyond
it ("certified within bound").
"""

from .paths import Path, inverse, word_root, circuit_normalize
from .maps import filtration, direction_map, illegal_turns, compose
from .errors import LViolation, NotCompletelySplit

TERM_EDGE = "edge"
TERM_INP = "inp"
TERM_EXC = "exceptional"
TERM_CONN = "connecting"
TERM_QE = "qe"


def is_nielsen_path(m, p):
    """Exact check f_#(p) = p (no bound involved)."""
    return not p.is_trivial() and m.apply(p) == p


def default_length_bound(m):
    """Length horizon for the catalog search: four times the longest edge
    image plus slack, enough to cover the splittings of every f(E)."""
    maxlen = max(len(p) for p in m.edge_images.values())
    return 4 * maxlen + 8


def _path_key(g, p):
    return [(g.edge_index(e), e.endswith("'")) for e in p.edges]


def _canonical_orientation(g, p):
    r = p.reverse()
    return p if _path_key(g, p) <= _path_key(g, r) else r


def _stable_prefixes(m, bound, iter_cap=None):
    """All (prefix, suffix) with f_#(prefix) = prefix.suffix, |prefix| <= bound.

    Prefixes start with a fixed direction.  The limit ray of a fixed
    direction is developed incrementally -- once the reduced image extends
    the current prefix, the next ray edge is read off the image -- so the
    whole sweep costs O(bound * max edge image).  Rays whose images shrink
    or oscillate are additionally chased by direct iteration (capped), with
    every iterate swept the same way.
    """
    if iter_cap is None:
        iter_cap = bound + 16
    g = m.graph
    dm = direction_map(m)
    found = {}

    def sweep(edge_seq):
        # img carries the reduced f-image of the growing prefix; ``agree``
        # is the verified common-prefix length, rewound when cancellation
        # pops below it, so the whole sweep is linear in the work f does.
        img = []
        agree = 0
        pref = []
        for i, e in enumerate(edge_seq):
            if i >= bound:
                break
            pref.append(e)
            for x in m.image(e).edges:
                if img and img[-1] == inverse(x):
                    img.pop()
                else:
                    img.append(x)
            agree = min(agree, len(img))
            while agree < len(pref) and agree < len(img) and img[agree] == pref[agree]:
                agree += 1
            if agree == len(pref) and len(img) >= len(pref):
                key = tuple(pref)
                if key not in found:
                    found[key] = (g.path(key), tuple(img[len(pref):]))

    for d in g.directions():
        if dm.map[d] != d:
            continue
        ray = g.path([d])
        seen = set()
        pending = ray
        for _ in range(iter_cap):
            nxt = m.apply(ray)
            stop = (
                nxt.is_trivial()
                or nxt.edges == ray.edges
                or nxt.edges in seen
                or len(ray) > bound + 2
            )
            if not nxt.is_trivial() and not nxt.starts_with(pending):
                sweep(pending.edges)
                pending = nxt
            else:
                pending = nxt if not nxt.is_trivial() else pending
            if stop:
                break
            seen.add(nxt.edges)
            ray = nxt
        sweep(pending.edges)
    return list(found.values())


def _trie_add(trie, edges):
    node = trie
    for e in edges:
        node = node.setdefault(e, {})
    node[None] = True


def _trie_depths(trie, edges):
    """Depths at which a prefix of ``edges`` is a member."""
    out = set()
    node = trie
    for i, e in enumerate(edges):
        node = node.get(e)
        if node is None:
            break
        if None in node:
            out.add(i + 1)
    return out


def _splits_into_nielsen(sigma, trie):
    """Can sigma be cut into two paths both in the Nielsen-word trie?

    The trie holds every Nielsen word the search produced, in both
    orientations, so one forward walk gives the valid left halves and one
    backward walk the valid right halves.
    """
    n = len(sigma)
    lefts = _trie_depths(trie, sigma.edges)
    rev = tuple(inverse(e) for e in reversed(sigma.edges))
    rights = {n - k for k in _trie_depths(trie, rev)}
    return any(1 <= i <= n - 1 for i in lefts & rights)


class NielsenEntry:
    """One catalog item: a Nielsen path of some period with flags."""

    def __init__(self, path, period, indivisible, height):
        self.path = path
        self.period = period
        self.indivisible = indivisible
        self.height = height

    def __repr__(self):
        tag = "iNp" if self.indivisible else "composite"
        return "<%s period %d %r>" % (tag, self.period, self.path)


class NielsenCatalog:
    """Nielsen paths of a map found within a length bound.

    * ``fixed_edges``: edges with f(E) = E (length-one Nielsen paths; kept
      apart from iNps, which have length at least two).
    * ``entries``: period-one Nielsen paths of length >= 2, each flagged
      indivisible or composite, with its filtration height.
    * ``periodic``: paths with minimal f_#-period in 2..period_bound.
    * ``closed_paths``: the closed ones among the above plus fixed loops.

    Completeness is certified only within ``bound`` (and ``period_bound``
    for the periodic list); consumers must treat absence as
    "not found within bound".
    """

    def __init__(self, m, bound, period_bound, entries, periodic):
        g = m.graph
        self.map = m
        self.bound = bound
        self.period_bound = period_bound
        self.fixed_edges = [
            e for e in g.edge_names if m.edge_images[e].edges == (e,)
        ]
        self.entries = entries
        self.periodic = periodic
        self.closed_paths = [g.path([e]) for e in self.fixed_edges if g.is_loop(e)]
        self.closed_paths += [x.path for x in entries if x.path.is_closed()]
        self.complete_within_bound = True

    def inps(self, height=None):
        out = [x for x in self.entries if x.indivisible]
        if height is not None:
            out = [x for x in out if x.height == height]
        return out

    def nielsen_paths(self):
        """All period-one entries, indivisible or not."""
        return [x.path for x in self.entries]

    def __repr__(self):
        return "<NielsenCatalog %d fixed edges, %d entries, %d periodic, bound %d>" % (
            len(self.fixed_edges),
            len(self.entries),
            len(self.periodic),
            self.bound,
        )


def _search_fixed_paths(m, bound):
    """Nielsen paths of length 2..bound via the stable prefix pairing.

    Prefixes are grouped by (end vertex, growth suffix) and, within a
    group, bucketed by last edge: sigma = p . reverse(q) is tight only for
    p, q from different buckets.
    """
    g = m.graph
    groups = {}
    nielsen_words = []
    for p, s in _stable_prefixes(m, bound):
        if not s:
            nielsen_words.append(p)
        groups.setdefault((p.end, s), {}).setdefault(p.edges[-1], []).append(p)
    found = {}
    for buckets in groups.values():
        lasts = sorted(buckets, key=lambda e: (g.edge_index(e), e.endswith("'")))
        for a in range(len(lasts)):
            for b in range(len(lasts)):
                if a == b:
                    continue
                for p in buckets[lasts[a]]:
                    for q in buckets[lasts[b]]:
                        if len(p) + len(q) > bound:
                            continue
                        sigma = Path(g, p.edges + q.reverse().edges)
                        sigma = _canonical_orientation(g, sigma)
                        if sigma.edges in found:
                            continue
                        if is_nielsen_path(m, sigma):
                            found[sigma.edges] = sigma
    sigmas = sorted(found.values(), key=lambda s: (len(s), _path_key(g, s)))
    return sigmas, nielsen_words


def build_catalog(m, bound=None, period_bound=3):
    """Search for Nielsen and periodic Nielsen paths up to a length bound.

    The default bound is four times the longest edge image plus slack.
    Results are cached on the map per (bound, period_bound).
    """
    if bound is None:
        bound = default_length_bound(m)
    key = ("catalog", bound, period_bound)
    if key in m._cache:
        return m._cache[key]
    filt = filtration(m)
    sigmas, nielsen_words = _search_fixed_paths(m, bound)
    trie = {}
    for e in m.graph.edge_names:
        if m.edge_images[e].edges == (e,):
            _trie_add(trie, (e,))
            _trie_add(trie, (inverse(e),))
    for w in nielsen_words:
        _trie_add(trie, w.edges)
        _trie_add(trie, w.reverse().edges)
    for sigma in sigmas:
        _trie_add(trie, sigma.edges)
        _trie_add(trie, sigma.reverse().edges)
    entries = []
    for sigma in sigmas:
        entries.append(
            NielsenEntry(
                sigma, 1, not _splits_into_nielsen(sigma, trie), filt.height(sigma)
            )
        )
    periodic = []
    mk = m
    for k in range(2, period_bound + 1):
        mk = compose(m, mk)
        for sigma in _search_fixed_paths(mk, bound)[0]:
            period = None
            probe = sigma
            for j in range(1, k + 1):
                probe = m.apply(probe)
                if probe == sigma:
                    period = j
                    break
            if period == k:
                periodic.append(NielsenEntry(sigma, k, None, filt.height(sigma)))
    cat = NielsenCatalog(m, bound, period_bound, entries, periodic)
    m._cache[key] = cat
    return cat


# -- linear edges and axes ------------------------------------------------------


class LinearEdge:
    """An NEG edge E (in the orientation with f(E) = E.w^d), w primitive
    closed Nielsen, d nonzero."""

    def __init__(self, edge, word, exponent):
        self.edge = edge
        self.word = word
        self.exponent = exponent

    def __repr__(self):
        return "<linear %s over %r ^ %d>" % (self.edge, self.word, self.exponent)


def detect_linear_edges(m, catalog=None):
    """Find the linear NEG edges of the maximal filtration.

    The suffix u of a NEG edge (tried in both orientations when the normal
    form E.u requires it) is tested exactly for being Nielsen and factored
    as w^d by its literal word root; the root of a Nielsen path is Nielsen
    (roots are unique in free groups), so no catalog lookup is needed.
    """
    out = []
    for s in filtration(m):
        if s.kind != "NEG" or s.neg_edge is None:
            continue
        u = s.neg_suffix
        if not is_nielsen_path(m, u):
            continue
        root_edges, d = word_root(u.edges)
        w = m.graph.path(root_edges)
        assert is_nielsen_path(m, w), "root of a Nielsen suffix must be Nielsen"
        out.append(LinearEdge(s.neg_edge, w, d))
    return out


class Axis:
    """An unoriented axis circuit with the linear edges twisting over it.

    ``word`` is the based axis path in the orientation used by the least
    linear edge; each member edge carries its exponent measured in that
    orientation.  ``multiplicity`` counts the members plus one (the axis
    itself), the number of independent comparison coordinates the axis
    supports.
    """

    def __init__(self, word, members):
        self.word = word
        self.members = members  # list of (oriented edge, signed exponent)
        self.multiplicity = len(members) + 1

    def exponent_of(self, edge):
        for e, d in self.members:
            if e == edge:
                return d
        raise KeyError(edge)

    def __repr__(self):
        ms = ", ".join("%s^%d" % (e, d) for e, d in self.members)
        return "<axis %r [%s]>" % (self.word, ms)


def axes(m, catalog=None):
    """Group linear edges by unoriented axis and enforce the linear clauses.

    Raises LViolation when two linear edges on one unoriented axis have
    based words that differ by more than orientation, or equal exponents.
    """
    g = m.graph
    linear = sorted(detect_linear_edges(m, catalog), key=lambda le: g.edge_index(le.edge))
    groups = {}
    for le in linear:
        c = circuit_normalize(le.word)
        cr = c.reverse()
        key = min(c.edges, cr.edges, key=lambda es: _path_key(g, Path(g, es)))
        groups.setdefault(key, []).append(le)
    out = []
    for key in sorted(groups, key=lambda es: _path_key(g, Path(g, es))):
        les = groups[key]
        word = les[0].word
        members = []
        for le in les:
            if le.word == word:
                members.append((le.edge, le.exponent))
            elif le.word == word.reverse():
                members.append((le.edge, -le.exponent))
            else:
                raise LViolation(
                    "linear edges %s and %s share the axis circuit but their "
                    "twisting words differ by more than orientation"
                    % (les[0].edge, le.edge)
                )
        exps = [d for _, d in members]
        if len(set(exps)) != len(exps):
            raise LViolation(
                "axis %r carries two linear edges with equal exponents" % word
            )
        out.append(Axis(word, members))
    return out


class QEFamily:
    """Paths e_i . w^p . inverse(e_j), p ranging over the integers.

    e_i, e_j are distinct linear edges over the common based axis word w
    (e_i the one with the smaller construction index).  The family is
    exceptional when the exponents have the same sign; only then are its
    members complete-splitting terms.
    """

    def __init__(self, axis, e_i, d_i, e_j, d_j):
        self.axis = axis
        self.e_i, self.d_i = e_i, d_i
        self.e_j, self.d_j = e_j, d_j

    @property
    def word(self):
        return self.axis.word

    def key(self):
        return (self.e_i, self.e_j, self.word.edges)

    def is_exceptional(self):
        return self.d_i * self.d_j > 0

    def ends(self):
        return {self.e_i, self.e_j}

    def other(self, e):
        return self.e_j if e == self.e_i else self.e_i

    def member_path(self, p, start=None):
        """The member e_i w^p inverse(e_j), or from the other end if start=e_j."""
        start = start or self.e_i
        g = self.word.graph
        first, last = (self.e_i, self.e_j) if start == self.e_i else (self.e_j, self.e_i)
        if start == self.e_j:
            p = -p
        mid = self.word.power(p)
        return Path(g, (first,) + mid.edges + (inverse(last),))

    def matches(self, path):
        """Signed power p when ``path`` is a member (measured from e_i), else None."""
        if len(path) < 2:
            return None
        first, last = path.edges[0], inverse(path.edges[-1])
        if {first, last} != self.ends() or first == last:
            return None
        mid = path.subpath(1, len(path) - 1)
        w = self.word
        if len(mid) % len(w) != 0:
            return None
        k = len(mid) // len(w)
        for p in (k, -k):
            if mid.edges == w.power(p).edges:
                return p if first == self.e_i else -p
        return None

    def __repr__(self):
        kind = "exceptional" if self.is_exceptional() else "quasi-exceptional"
        return "<%s family %s w^* %s' over %r>" % (kind, self.e_i, self.e_j, self.word)


def qe_families(m, catalog=None):
    """All quasi-exceptional families, deterministically ordered."""
    g = m.graph
    out = []
    for ax in axes(m, catalog):
        for i in range(len(ax.members)):
            for j in range(i + 1, len(ax.members)):
                (ei, di), (ej, dj) = ax.members[i], ax.members[j]
                if g.edge_index(ei) > g.edge_index(ej):
                    (ei, di), (ej, dj) = (ej, dj), (ei, di)
                out.append(QEFamily(ax, ei, di, ej, dj))
    return out


def is_exceptional_path(m, path, catalog=None):
    """Does the path belong to an exceptional (same-sign) family?"""
    for fam in qe_families(m, catalog):
        if fam.is_exceptional() and fam.matches(path) is not None:
            return fam
    return None


# -- complete splittings ---------------------------------------------------------


class Term:
    def __init__(self, kind, path, family=None, power=None, height=None):
        self.kind = kind
        self.path = path
        self.family = family
        self.power = power
        self.height = height

    def __repr__(self):
        return "<%s %r>" % (self.kind, self.path)


class CompleteSplitting:
    def __init__(self, path, terms, certificate):
        self.path = path
        self.terms = terms
        self.certificate = certificate

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return "<splitting %s>" % " | ".join(
            " ".join(t.path.edges) for t in self.terms
        )


def _juncture_ok(m, left, right, k_max):
    """No cancellation between iterated images at the juncture.

    Returns "legal" when the juncture turn is legal (exact, sufficient for
    all k), "depth" when only the explicit iterate check up to k_max
    passes, None on failure.
    """
    d1 = inverse(left.path.edges[-1])
    d2 = right.path.edges[0]
    if d1 != d2 and frozenset((d1, d2)) not in illegal_turns(m):
        return "legal"
    a, b = left.path, right.path
    for _ in range(k_max):
        a, b = m.apply(a), m.apply(b)
        if a.is_trivial() or b.is_trivial():
            return None
        if a.edges[-1] == inverse(b.edges[0]):
            return None
    return "depth"


def _candidates(m, path, i, filt, fams, inps_by_first):
    """Candidate terms starting at offset i, in search priority order."""
    e = path.edges[i]
    lvl = filt.level(e)
    if filt[lvl].kind == "zero":
        j = i
        while j < len(path) and filt.level(path.edges[j]) == lvl:
            j += 1
        return [Term(TERM_CONN, path.subpath(i, j), height=lvl)]
    cands = []
    # exceptional paths from a same-sign family, longest first
    for fam in fams:
        if not fam.is_exceptional() or e not in fam.ends():
            continue
        other_inv = inverse(fam.other(e))
        ends = set()
        for wdir in (fam.word, fam.word.reverse()):
            step = len(wdir)
            pos = i + 1
            while True:
                if pos < len(path) and path.edges[pos] == other_inv:
                    ends.add(pos + 1)
                if path.edges[pos : pos + step] == wdir.edges:
                    pos += step
                else:
                    break
        for end in ends:
            cands.append((end, Term(TERM_EXC, path.subpath(i, end), family=fam)))
    # indivisible Nielsen paths from the catalog, longest first
    for sigma, height in inps_by_first.get(e, []):
        n = len(sigma)
        if path.edges[i : i + n] == sigma.edges:
            cands.append((i + n, Term(TERM_INP, path.subpath(i, i + n), height=height)))
    # a single edge of an irreducible stratum
    single = Term(TERM_EDGE, path.subpath(i, i + 1), height=lvl)
    cands.sort(key=lambda et: (-et[0], et[1].kind != TERM_EXC))
    return [t for _, t in cands] + [single]


def complete_split(m, path, catalog=None, k_max=4, node_cap=100000):
    """Parse a path into complete-splitting terms, verified as it goes.

    Terms are single edges of irreducible strata, indivisible Nielsen paths
    (catalog), exceptional paths, and maximal connecting subpaths in zero
    strata.  Candidates are tried longest first with backtracking; a
    candidate may follow the previous term only when the juncture shows no
    cancellation under iteration (exact turn legality, or the explicit
    check to depth k_max).  Raises NotCompletelySplit with the furthest
    failing offset when no parse survives.
    """
    if catalog is None:
        catalog = build_catalog(m)
    filt = filtration(m)
    if path.is_trivial():
        return CompleteSplitting(path, [], "trivial")
    fams = qe_families(m, catalog)
    inps_by_first = {}
    for entry in catalog.inps():
        for sigma in (entry.path, entry.path.reverse()):
            inps_by_first.setdefault(sigma.edges[0], []).append((sigma, entry.height))
    for lst in inps_by_first.values():
        lst.sort(key=lambda sh: -len(sh[0]))

    best_fail = [0]
    nodes = [0]

    def extend(i, acc, worst_cert):
        nodes[0] += 1
        if nodes[0] > node_cap:
            raise NotCompletelySplit(
                "splitting search budget exhausted", position=best_fail[0]
            )
        if i == len(path):
            return acc, worst_cert
        best_fail[0] = max(best_fail[0], i)
        for term in _candidates(m, path, i, filt, fams, inps_by_first):
            cert = "legal"
            if acc:
                cert = _juncture_ok(m, acc[-1], term, k_max)
                if cert is None:
                    continue
            got = extend(
                i + len(term.path),
                acc + [term],
                cert if cert == "depth" else worst_cert,
            )
            if got is not None:
                return got
        return None

    got = extend(0, [], "legal")
    if got is None:
        raise NotCompletelySplit(
            "path %r is not completely split" % path, position=best_fail[0]
        )
    terms, worst = got
    certificate = (
        "legal-turns" if worst == "legal" else "verified-to-depth-%d" % k_max
    )
    return CompleteSplitting(path, terms, certificate)


def verify_splitting(m, path, terms, k_max=4):
    """Check a proposed splitting: terms concatenate to the path and no
    juncture cancels under iteration.  Returns (ok, certificate)."""
    flat = []
    for t in terms:
        flat.extend(t.path.edges)
    if tuple(flat) != path.edges:
        return False, "terms do not concatenate to the path"
    worst = "legal"
    for left, right in zip(terms, terms[1:]):
        cert = _juncture_ok(m, left, right, k_max)
        if cert is None:
            return False, "cancellation at a juncture"
        if cert == "depth":
            worst = "depth"
    # belt and braces: the iterated image must split along the same points
    probe = path
    probes = list(terms)
    for _ in range(min(2, k_max)):
        probe = m.apply(probe)
        probes = [Term(t.kind, m.apply(t.path)) for t in probes]
        flat = []
        for t in probes:
            flat.extend(t.path.edges)
        if tuple(flat) != probe.edges:
            return False, "iterate does not respect the splitting"
    return True, ("legal-turns" if worst == "legal" else "verified-to-depth-%d" % k_max)


class QESplitting:
    """Complete splitting coarsened by merging maximal quasi-exceptional runs."""

    def __init__(self, path, terms, certificate):
        self.path = path
        self.terms = terms
        self.certificate = certificate

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def qe_terms(self):
        return [t for t in self.terms if t.kind == TERM_QE]

    def __repr__(self):
        return "<qe-splitting %s>" % " | ".join(
            "%s:%s" % (t.kind, " ".join(t.path.edges)) for t in self.terms
        )


def _is_nielsen_term(m, t):
    if t.kind == TERM_INP:
        return True
    if t.kind == TERM_EDGE:
        e = t.path.edges[0]
        return m.image(e).edges == (e,)
    return False


def qe_split(m, path, catalog=None, splitting=None):
    """QE-splitting: complete splitting with runs [e_i][Nielsen...][e_j']
    matching a family merged into one quasi-exceptional term (and
    exceptional single terms relabelled).  QE terms never overlap; the scan
    is left to right."""
    if splitting is None:
        splitting = complete_split(m, path, catalog)
    fams = qe_families(m, catalog)
    by_end = {}
    for fam in fams:
        for e in fam.ends():
            by_end.setdefault(e, []).append(fam)
    terms = list(splitting.terms)
    out = []
    i = 0
    while i < len(terms):
        t = terms[i]
        if t.kind == TERM_EXC:
            p = t.family.matches(t.path)
            out.append(Term(TERM_QE, t.path, family=t.family, power=p))
            i += 1
            continue
        merged = False
        if t.kind == TERM_EDGE and t.path.edges[0] in by_end:
            e = t.path.edges[0]
            j = i + 1
            while j < len(terms) and _is_nielsen_term(m, terms[j]):
                j += 1
            if j < len(terms) and terms[j].kind == TERM_EDGE:
                closer = terms[j].path.edges[0]
                for fam in by_end[e]:
                    if closer != inverse(fam.other(e)):
                        continue
                    lo = sum(len(x.path) for x in terms[:i])
                    hi = lo + sum(len(x.path) for x in terms[i : j + 1])
                    cand = path.subpath(lo, hi)
                    p = fam.matches(cand)
                    if p is not None:
                        out.append(Term(TERM_QE, cand, family=fam, power=p))
                        i = j + 1
                        merged = True
                        break
        if not merged:
            out.append(t)
            i += 1
    return QESplitting(path, out, splitting.certificate)
