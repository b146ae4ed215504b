"""Enumerate canonical cubic models per genus and certify them in batch.

The canonical model of an irreducible cubic graph of genus g with q == 0
has 2g-2 vertices of valence 3 and 3g-3 edges, no loops.  We enumerate all
loopless 3-regular multigraphs on 2g-2 labeled vertices by backtracking
over pair multiplicities (<= 3), filter the connected 2-connected ones,
and reject isomorphic duplicates by canonical form.  Labels g<g>-<k> follow
the canonical-key order, so they are stable across runs.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .certify import Certificate, minimal_A
from .errors import GenusTooLarge
from .graphs import (
    Edge,
    PMGraph,
    SymbolicLength,
    WeightedMultigraph,
    _connected,
    bridges_and_blocks,
    canonical_form,
    pm_graph_to_json,
)
from .rationals import format_rational


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    genus: int
    key: str
    n_vertices: int
    n_edges: int
    pm: PMGraph
    certificate: Optional[Certificate] = None

    def to_json(self) -> dict:
        data = {
            "label": self.label,
            "genus": self.genus,
            "key": self.key,
            "vertices": self.n_vertices,
            "edges": self.n_edges,
        }
        if self.certificate is not None:
            data["certificate"] = self.certificate.to_json()
        return data


def _pair_multiplicity_solutions(n: int) -> list[dict[tuple[int, int], int]]:
    """All ways to give each unordered pair a multiplicity <= 3 so that
    every vertex ends with degree exactly 3."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    deg = [0] * n
    chosen: dict[tuple[int, int], int] = {}
    out: list[dict[tuple[int, int], int]] = []

    def recurse(idx: int) -> None:
        if idx == len(pairs):
            if all(d == 3 for d in deg):
                out.append(dict(chosen))
            return
        i, j = pairs[idx]
        top = min(3 - deg[i], 3 - deg[j])
        for t in range(top + 1):
            deg[i] += t
            deg[j] += t
            # moving past (i, n-1) finalizes vertex i
            if not (j == n - 1 and deg[i] != 3):
                if t:
                    chosen[(i, j)] = t
                recurse(idx + 1)
                chosen.pop((i, j), None)
            deg[i] -= t
            deg[j] -= t

    recurse(0)
    return out


def _build_symbolic_graph(n: int, multiplicities: dict[tuple[int, int], int]) -> PMGraph:
    vwidth = len(str(n))
    vertex = [f"v{i + 1:0{vwidth}d}" for i in range(n)]
    m = sum(multiplicities.values())
    ewidth = len(str(m))
    edges = []
    k = 0
    for (i, j), mult in sorted(multiplicities.items()):
        for _ in range(mult):
            k += 1
            edges.append(Edge(f"e{k:0{ewidth}d}", vertex[i], vertex[j], SymbolicLength(k)))
    return PMGraph(WeightedMultigraph(vertex, edges), {})


def enumerate_cubic(g: int, genus_limit: int = 5) -> list[CatalogEntry]:
    """All canonical cubic models of genus g up to isomorphism."""
    if g < 2:
        raise GenusTooLarge(f"no canonical cubic models below genus 2, got {g}")
    if g > genus_limit:
        raise GenusTooLarge(
            f"genus {g} beyond the enumeration limit {genus_limit}; raise genus_limit at your own risk"
        )
    n = 2 * g - 2
    seen: dict[str, PMGraph] = {}
    for multiplicities in _pair_multiplicity_solutions(n):
        pairs = [
            (f"a{i}", f"a{j}")
            for (i, j), mult in multiplicities.items()
            for _ in range(mult)
        ]
        names = [f"a{i}" for i in range(n)]
        if not _connected(names, pairs):
            continue
        pm = _build_symbolic_graph(n, multiplicities)
        _, irreducible = bridges_and_blocks(pm.graph)
        if not irreducible:
            continue
        key = canonical_form(pm.graph, ignore_lengths=True)
        if key not in seen:
            seen[key] = pm
    entries = []
    for index, key in enumerate(sorted(seen), start=1):
        pm = seen[key]
        entries.append(
            CatalogEntry(
                label=f"g{g}-{index}",
                genus=g,
                key=key,
                n_vertices=len(pm.graph.vertices),
                n_edges=len(pm.graph.edges),
                pm=pm,
            )
        )
    return entries


def default_threads() -> int:
    env = os.environ.get("BOGOGRAPH_THREADS")
    if env is not None:
        return max(1, int(env))
    return os.cpu_count() or 1


def _certify_entry(entry: CatalogEntry) -> Certificate:
    return minimal_A(entry.pm)


def certify_catalog(
    g: int, threads: Optional[int] = None, genus_limit: int = 5
) -> tuple[list[CatalogEntry], Optional[Fraction]]:
    """Certify every catalog entry; c(g) is the smallest certified bound.

    Returns (entries with certificates, c(g)); c(g) is None if any entry
    came back infeasible.
    """
    entries = enumerate_cubic(g, genus_limit=genus_limit)
    threads = default_threads() if threads is None else max(1, threads)
    if threads > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(entries))) as pool:
            certificates = list(pool.map(_certify_entry, entries))
    else:
        certificates = [_certify_entry(entry) for entry in entries]
    entries = [
        replace(entry, certificate=cert)
        for entry, cert in zip(entries, certificates)
    ]
    if any(not cert.feasible for cert in certificates):
        return entries, None
    c_g = min(cert.bound for cert in certificates)
    return entries, c_g


def table_rows(entries: list[CatalogEntry]) -> list[str]:
    """One line per certified entry, matching the certificate table layout."""
    rows = []
    for entry in entries:
        cert = entry.certificate
        if cert is None:
            rows.append(f"{entry.label}  (uncertified)")
        elif not cert.feasible:
            rows.append(f"{entry.label}  INFEASIBLE ({len(cert.offending)} offending monomials)")
        else:
            rows.append(
                f"{entry.label}  A = {format_rational(cert.a_min)}  "
                f"bound = {format_rational(cert.bound)}  "
                f"conjecture_ok = {cert.conjecture_ok}"
            )
    return rows
