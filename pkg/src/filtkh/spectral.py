"""Pages of the spectral sequence of the filtered complex.

Pages are indexed by the q-drop of their differential: the page-k
differential is induced by d on classes of cycles-to-order-k and lowers q
by exactly k, so E_0 is the associated graded complex, E_1 is the homology
of the q-preserving differential, and the pages stabilize once k exceeds
the q-spread of the chain basis.

With Z_k^{p,r} = {x in F^p C^r : dx in F^(p-k)} the page is

    E_k^{p,r} = Z_k^{p,r} / (Z_(k-1)^(p-1,r) + d Z_(k-1)^(p+k-1, r-1)),

and every dimension in sight reduces, through the standard exchange
identities (d Z_(k-1)^(p') n F^(p'-k) = d Z_k^(p'), etc.), to ranks of
column/row truncations of the q-ordered differential.  Those ranks all
come from the one-pass rank profiles shared with the homology module, so
computing a page costs no more than computing homology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .homology import filtered_homology, filtration_profile, tables_for


@dataclass
class SpectralPage:
    k: int
    cells: dict                 # {(r, q): dim}
    dranks: dict                # {(r, q): rank of d_k out of the cell}
    collapsed: bool

    def total_dim(self):
        return sum(self.cells.values())

    def degree_totals(self):
        out = {}
        for (r, _), dim in self.cells.items():
            out[r] = out.get(r, 0) + dim
        return out


def _dim_cell(t, k, r, p):
    """dim E_k^{p,r} from the rank tables."""
    return (
        t.n(r, p) - t.n(r, p - 1)
        - t.rho(r, p, p - k) + t.rho(r, p - 1, p - k)
        + t.rho(r - 1, p + k - 1, p) - t.rho(r - 1, p + k - 1, p - 1)
    )


def _cells(c, k):
    t = tables_for(c)
    cells = {}
    for r in c.degrees():
        qs = sorted(set(c.qs.get(r, [])))
        for p in qs:
            dim = _dim_cell(t, k, r, p)
            if dim:
                cells[(r, p)] = dim
    return cells


def _dranks(c, k, cells, next_cells):
    """Ranks of d_k out of each cell, solved along the d_k-lines.

    d_k maps (r, p) -> (r+1, p-k); along such a line the drop
    dim E_k - dim E_(k+1) at a cell is rank(out) + rank(in), and rank(in)
    at a cell is rank(out) at its predecessor, so ranks unwind from the
    lowest homological degree of each line.
    """
    lines = {}
    for (r, p) in set(cells) | set(next_cells):
        lines.setdefault(p + k * r, []).append((r, p))
    out = {}
    for cells_on_line in lines.values():
        carry = 0
        for (r, p) in sorted(cells_on_line):
            drop = cells.get((r, p), 0) - next_cells.get((r, p), 0)
            rank_out = drop - carry
            if rank_out < 0:
                raise AssertionError("inconsistent page rank bookkeeping")
            if rank_out:
                out[(r, p)] = rank_out
            carry = rank_out
        if carry != 0:
            raise AssertionError("d_k rank chain did not terminate")
    return out


def limit_cells(c):
    """E-infinity: the associated graded of the filtration on homology."""
    prof = filtration_profile(c)
    cells = {}
    for r, per in prof.items():
        prev = 0
        for k in sorted(per):
            dim = per[k] - prev
            if dim:
                cells[(r, k)] = dim
            prev = per[k]
    return cells


def page(c, k) -> SpectralPage:
    """The page with q-drop k (k >= 0)."""
    if k < 0:
        raise ValueError("page index must be >= 0")
    cells = _cells(c, k)
    nxt = _cells(c, k + 1)
    dranks = _dranks(c, k, cells, nxt)
    collapsed = cells == limit_cells(c)
    return SpectralPage(k=k, cells=cells, dranks=dranks, collapsed=collapsed)


def all_pages(c, max_page=None):
    """Pages from E_0 until the first collapsed page (dims equal to the
    associated graded of the filtered homology, hence to all later pages).
    """
    bound = c.q_spread() + 1
    if max_page is not None:
        bound = min(bound, max_page)
    pages = []
    for k in range(0, bound + 1):
        pg = page(c, k)
        pages.append(pg)
        if pg.collapsed and k >= 1:
            break
    return pages


def compare_pages(c1, c2, max_page=None):
    """Equality report of page dims for k >= 1 (E_0 is not an invariant).

    Past its collapse point a complex's pages repeat, so the shorter list is
    padded with its final page.
    """
    p1 = all_pages(c1, max_page=max_page)
    p2 = all_pages(c2, max_page=max_page)
    kmax = max(p1[-1].k, p2[-1].k)

    def cells_at(pages, k):
        for pg in pages:
            if pg.k == k:
                return pg.cells
        return pages[-1].cells

    report = {}
    for k in range(1, kmax + 1):
        report[k] = cells_at(p1, k) == cells_at(p2, k)
    return {
        "pages": report,
        "equal": all(report.values()),
        "max_page": kmax,
    }
