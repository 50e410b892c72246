"""Experiment runner: deterministic CSV/JSON reports over configured decks.

Data files never carry timestamps; wall-clock information goes to a sidecar
log.  Search effort is reported as the deterministic step count of the
backtracking search.  Exit codes: 0 all hard assertions passed, 1 invariant
violation, 2 configuration error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from . import decks as deckmod
from . import independence as ind
from . import measures, periods, pullback as pb, verify, williams
from .lattice import SpecError
from .toeplitz import BETA

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3


def _out_dir(args, deck_name: str, sub: str) -> Path:
    base = Path(args.out) if args.out else Path("tl-out")
    path = base / deck_name / sub
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _log(path: Path, message: str) -> None:
    with open(path, "a") as fh:
        fh.write(f"{time.strftime('%Y-%m-%dT%H:%M:%S')} {message}\n")


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cmd_gen_z(deck, args) -> int:
    if deck.williams is None:
        print("deck has no 1-d period sequence", file=sys.stderr)
        return EXIT_CONFIG
    wp = deck.williams
    N = args.window or 2 * wp.periods[1]
    patch = williams.generate(wp, N)
    out = _out_dir(args, deck.name, "gen-z")
    with open(out / "patch.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["position", "symbol", "level"])
        for n in patch.positions():
            s = patch.symbol(n)
            w.writerow([n, "" if s is None else s, patch.level(n)])
    sums = williams.convergence_partial_sums(wp)
    _write_json(out / "summary.json", {
        "deck": deck.name,
        "m": wp.m,
        "periods": list(wp.periods),
        "window": N,
        "undefined_cells": patch.undefined_count(),
        "undefined_density": _frac(Fraction(patch.undefined_count(), 2 * N + 1)),
        "ratio_partial_sums": [_frac(s) for s in sums],
        "provenance": "counted",
    })
    print(f"wrote {out}/patch.csv")
    return EXIT_OK


def cmd_gen_group(deck, args) -> int:
    cons = deckmod.construction(deck)
    N = args.level
    win = cons.window(N)
    out = _out_dir(args, deck.name, "gen-group")
    with open(out / "patch.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["finite_part"] + [f"v{j + 1}" for j in range(deck.group.rank)]
                   + ["symbol", "level"])
        for (v, f), sym, lvl in win.items():
            w.writerow([f, *v, sym, lvl])
    strata = {int(l): int(c) for l, c in
              zip(*np.unique(win.levels, return_counts=True))}
    fresh_ok = all(
        len(cons.fresh_cells_checked(n)) == measures.fresh_count(cons, n)
        for n in range(1, min(N, cons.depth - 1) + 1))
    _write_json(out / "summary.json", {
        "deck": deck.name,
        "level": N,
        "alphabet": list(cons.alphabet),
        "strata_cells_per_level": strata,
        "fresh_sizes": {n: measures.fresh_count(cons, n) for n in range(N + 1)},
        "fresh_recursion_ok": fresh_ok,
        "provenance": "counted",
    })
    print(f"wrote {out}/patch.csv")
    return EXIT_OK if fresh_ok else EXIT_INVARIANT


def cmd_measures(deck, args) -> int:
    cons = deckmod.construction(deck)
    N = args.level
    out = _out_dir(args, deck.name, "measures")
    with open(out / "frequencies.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["level", "symbol", "numerator", "denominator", "provenance"])
        for n in range(1, N + 1):
            for sym, val in measures.mu_freq_counted(cons, n).items():
                w.writerow([n, sym, val.numerator, val.denominator, "counted"])
    verdicts = {}
    ok = True
    for n in range(0, min(3, cons.depth - 1) + 1):
        c = measures.density_product_check(cons, n)
        verdicts[f"density_level_{c.level}"] = {
            "counted": _frac(c.counted), "closed": _frac(c.closed),
            "equal": c.equal, "provenance": "counted+closed-form"}
        ok = ok and c.equal
    for n in (1, 2):
        if N <= n + 1:
            continue  # the identity needs a strictly deeper window
        good = measures.verify_transition(cons, n, N)
        verdicts[f"transition_{n}"] = {"equal": good, "provenance": "counted"}
        ok = ok and good
    good = measures.verify_projection(cons, N)
    verdicts["projection"] = {"equal": good, "provenance": "counted"}
    ok = ok and good
    if measures.has_marker(cons):
        want = measures.marker_mass_closed(cons)
        got = measures.mu_freq_counted(cons, N).get(BETA, Fraction(0))
        verdicts["marker_mass"] = {
            "counted": _frac(got), "closed": _frac(want), "equal": got == want,
            "provenance": "counted+closed-form"}
        ok = ok and got == want
    _write_json(out / "verdicts.json", {"deck": deck.name, "level": N,
                                        "checks": verdicts, "passed": ok})
    print(f"wrote {out}/verdicts.json")
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_fibers(deck, args) -> int:
    out = _out_dir(args, deck.name, "fibers")
    rows = []
    if deck.williams is not None:
        wp = deck.williams
        radius = williams.max_safe_fiber_radius(wp, 2)
        eta = williams.generate(wp, wp.periods[-1] + radius + wp.periods[0] + 2)
        bound = wp.m
        cons = deckmod.construction(deck)
        for g2 in range(wp.periods[1]):
            coords = williams.coords_of_int(wp, g2, 2)
            patches, info = williams.fiber_patches(wp, eta, coords, radius)
            towers = periods.tower_pieces(
                cons, periods.code_orbit_point(cons, ((g2,), 0), 2), 1, radius)
            rows.append({"coords": list(coords), "fiber_count": len(patches),
                         "pieces": len(towers),
                         "aperiodic_cells": info["aperiodic_cells"]})
        piece_bound = 2
    else:
        cons = deckmod.construction(deck)
        win = cons.window(3)
        bound = deck.group_fiber_bound()
        piece_bound = 2 ** deck.group.rank * deck.group.finite_order
        for coords in periods.all_coords_at_depth(cons, 2):
            res = periods.enumerate_fiber(cons, coords, args.radius, win)
            npieces = len(periods.tower_pieces(cons, coords, 1, args.radius))
            rows.append({
                "coords": [[list(t[0]), t[1]] for t in coords.reps],
                "fiber_count": res.count,
                "pieces": npieces,
                "aperiodic_pieces": res.aperiodic_piece_count,
            })
    worst = max(r["fiber_count"] for r in rows)
    passed = worst <= bound
    _write_json(out / "fibers.json", {
        "deck": deck.name, "depth": 2, "rows": rows,
        "fiber_bound": bound, "piece_bound": piece_bound,
        "max_fiber_count": worst, "passed": passed, "provenance": "counted"})
    print(f"wrote {out}/fibers.json")
    return EXIT_OK if passed else EXIT_INVARIANT


def cmd_independence(deck, args) -> int:
    out = _out_dir(args, deck.name, "independence")
    deadline = time.monotonic() + args.budget if args.budget else None
    rows = []
    exhausted = False
    if deck.williams is not None:
        wp = deck.williams
        p3 = wp.periods[2]
        eta = williams.generate(wp, 2 * wp.periods[3] + p3 + 50)
        oracle = ind.ZOracle(eta, margin=p3 + 1)
        cyls = [ind.Cylinder.single_site(1, s) for s in range(deck.m)]
        target = args.size or (3 if deck.m == 2 else 2)
        cands = ind.z_candidates(p3)
        radius = p3
    else:
        cons = deckmod.construction(deck)
        oracle = ind.GOracle(cons.window(3))
        cyls = [ind.Cylinder.single_site(deck.group.rank, s) for s in (1, 2)]
        target = args.size or 2
        radius = 15
        cands = ind.g_candidates(deck.group, radius)
    res = ind.find_independence_set(cyls, target, oracle, cands, deck.group,
                                    max_steps=args.max_steps, deadline=deadline)
    rows.append({"k": len(cyls), "L": target, "radius": radius,
                 "verdict": res.status, "steps": res.steps})
    if res.certificate is not None:
        (out / "certificate.json").write_text(res.certificate.to_json() + "\n")
    exhausted = exhausted or res.status == "exhausted"
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "L", "radius", "verdict", "steps"])
        for r in rows:
            w.writerow([r["k"], r["L"], r["radius"], r["verdict"], r["steps"]])
    lower, upper = ind.entropy_bounds_bits(
        len(cyls) if res.status == "found" else 1, deck.entropy_fiber_bound())
    _write_json(out / "entropy.json", {
        "deck": deck.name, "lower_bits": lower, "upper_bits": upper,
        "provenance": "search"})
    print(f"wrote {out}/summary.csv")
    if exhausted:
        return EXIT_BUDGET
    return EXIT_OK if res.status == "found" else EXIT_INVARIANT


def cmd_pullback(deck, args) -> int:
    out = _out_dir(args, deck.name, "pullback")
    weights = tuple(int(x) for x in args.weights.split(","))
    hom = pb.HomSpec(weights)
    ok, reason = pb.validate_hom(hom, deck.group)
    source = deckmod.bundled_deck(args.source)
    if source.williams is None:
        print("source deck has no 1-d construction", file=sys.stderr)
        return EXIT_CONFIG
    doc = {"deck": deck.name, "weights": list(weights),
           "valid": ok, "reason": reason, "source": source.name}
    if not ok:
        _write_json(out / "pullback.json", doc)
        print(f"wrote {out}/pullback.json (homomorphism rejected)")
        return EXIT_INVARIANT
    wp = source.williams
    eta = williams.generate(wp, args.reach * (sum(abs(w) for w in weights) + 1))
    window = [(v, f) for f in range(deck.group.finite_order)
              for v in product(*[range(-args.reach, args.reach + 1)]
                               * deck.group.rank)]
    patch = pb.pullback_window(hom, deck.group, eta, window)
    with open(out / "patch.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["finite_part"] + [f"v{j + 1}" for j in range(deck.group.rank)]
                   + ["symbol", "level"])
        for (v, f) in window:
            sym = patch.get((v, f), "")
            w.writerow([f, *v, sym, ""])
    doc["cells"] = len(window)
    doc["section"] = list(pb.section_vector(hom))
    _write_json(out / "pullback.json", doc)
    print(f"wrote {out}/patch.csv")
    return EXIT_OK


def cmd_verify_all(deck, args) -> int:
    out = _out_dir(args, deck.name if deck else "all", "verify-all")
    deadline = time.monotonic() + args.budget if args.budget else None
    log = out / "run.log"
    _log(log, "verify-all started")
    groups = verify.acceptance_checks(max_steps=args.max_steps, deadline=deadline)

    def run_group(item):
        return item

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            groups = list(pool.map(run_group, groups))

    doc = {"criteria": [], "passed": True}
    exhausted = False
    for crit, results in groups:
        block = {"criterion": crit, "checks": [], "passed": True}
        for r in results:
            print(r.line())
            block["checks"].append({
                "name": r.name, "passed": r.passed,
                "provenance": r.provenance, "details": r.details})
            block["passed"] = block["passed"] and r.passed
            if r.provenance == "search" and not r.passed:
                status = r.details.get("status")
                exhausted = exhausted or status == "exhausted"
        doc["criteria"].append(block)
        doc["passed"] = doc["passed"] and block["passed"]
    _write_json(out / "verdict.json", doc)
    _log(log, f"verify-all finished passed={doc['passed']}")
    print(f"wrote {out}/verdict.json")
    if exhausted:
        return EXIT_BUDGET
    return EXIT_OK if doc["passed"] else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toeplitz-lab",
        description="Toeplitz subshift constructions, exact measures and "
                    "independence certificates")
    ap.add_argument("command", choices=[
        "gen-z", "gen-group", "measures", "fibers", "independence",
        "pullback", "verify-all", "show-config"])
    ap.add_argument("--config", default="williams-m2",
                    help="bundled deck name or path to a JSON deck file")
    ap.add_argument("--out", default=None, help="output directory")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--budget", type=float, default=None,
                    help="wall-clock budget in seconds for searches")
    ap.add_argument("--max-steps", type=int, default=2_000_000,
                    help="deterministic step budget for searches")
    ap.add_argument("--window", type=int, default=None,
                    help="gen-z window radius")
    ap.add_argument("--level", type=int, default=3,
                    help="box level for gen-group / measures")
    ap.add_argument("--radius", type=int, default=8,
                    help="window radius for fiber scans")
    ap.add_argument("--size", type=int, default=None,
                    help="independence set size to search for")
    ap.add_argument("--weights", default="1,1",
                    help="pullback weight vector, comma separated")
    ap.add_argument("--source", default="williams-m2",
                    help="source deck for pullback")
    ap.add_argument("--reach", type=int, default=8,
                    help="pullback window radius")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        deck = deckmod.load_deck(args.config)
    except SpecError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "show-config":
        print(json.dumps(deckmod.deck_to_config(deck), indent=2, sort_keys=True))
        return EXIT_OK
    handlers = {
        "gen-z": cmd_gen_z,
        "gen-group": cmd_gen_group,
        "measures": cmd_measures,
        "fibers": cmd_fibers,
        "independence": cmd_independence,
        "pullback": cmd_pullback,
        "verify-all": cmd_verify_all,
    }
    try:
        return handlers[args.command](deck, args)
    except SpecError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
