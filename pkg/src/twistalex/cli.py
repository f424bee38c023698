"""Command line interface: ``twistalex {compute,genus,fiber,search,batch}``."""
from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .algebra.fields import GF, QQ, is_prime
from .algebra.normal_forms import ContractError
from .fpgroup import PresentationError, braid_longitude, derive_phi, zero_surgery
from .knot_io import (
    InputError,
    KnotTableEntry,
    resolve_entry,
    emit_report,
    fixture_path,
    invariant_document,
    load_table,
    resolve_hom,
    resolve_input,
    fraction_text,
    verdict_document,
)
from .reps import SearchOptions, build_representation, flavor_name, format_cycles, search_homs
from .twisted import (
    DEFAULT_PRIMES,
    InvariantError,
    OBSTRUCTED,
    compute_invariants,
    fibering_check,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4

_FLAVOR_CHOICES = ("trivial", "perm", "std")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _flavor_list(text: str) -> list[str]:
    out = []
    for x in text.split(","):
        x = x.strip()
        if x not in _FLAVOR_CHOICES and x not in ("permutation", "standard"):
            raise argparse.ArgumentTypeError(f"flavor must be one of {'|'.join(_FLAVOR_CHOICES)}")
        out.append(flavor_name(x))
    return out


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    ks: tuple[int, ...]
    primes: tuple[int, ...]
    flavors: tuple[str, ...]
    hom: str | None = None
    budget: float | None = None
    workers: int = 1
    json: bool = False
    longitude: str | None = None
    genus: int | None = None
    timings: bool = False
    names: tuple[str, ...] = ()
    mode: str = "genus"
    cycle_type: str | None = None

    def validate(self) -> None:
        if any(k < 1 for k in self.ks):
            raise InputError("k must be >= 1")
        for p in self.primes:
            if not is_prime(p):
                raise InputError(f"{p} is not prime")
        if self.budget is not None and self.budget <= 0:
            raise InputError("budget must be positive")
        if self.workers < 1:
            raise InputError("workers must be >= 1")


def _load(cfg: RunConfig, entry: KnotTableEntry | None = None):
    res = resolve_entry(entry) if entry is not None else resolve_input(cfg.input)
    p = res.presentation
    if p.phi is None:
        p = derive_phi(p)
    if cfg.longitude:
        if cfg.longitude == "auto":
            if res.braid is None:
                raise InputError("--longitude auto needs a braid input")
            lam = braid_longitude(res.braid)
        else:
            lam = p.word(cfg.longitude)
        p = zero_surgery(p, lam)
    return res, p


def _fields(primes: Sequence[int]):
    return [GF(p) for p in primes]


def _render(docs, cfg: RunConfig) -> bytes:
    if isinstance(docs, list) and len(docs) == 1:
        docs = docs[0]
    if cfg.json:
        return emit_report(docs, "json")
    if isinstance(docs, list):
        return b"---\n".join(emit_report(d, "text") for d in docs)
    return emit_report(docs, "text")


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute(cfg: RunConfig):
    res, p = _load(cfg)
    docs = []
    h = None
    if cfg.hom:
        h = resolve_hom(cfg.hom, p, cfg.ks[0] if cfg.ks else None)
    for flavor in cfg.flavors:
        if flavor != "trivial" and h is None:
            raise InputError(f"flavor {flavor} needs --hom")
        for field in _fields(cfg.primes):
            try:
                r = build_representation(h if flavor != "trivial" else None, flavor, field, p.num_generators)
            except ValueError as e:
                raise InputError(str(e)) from None
            rep = compute_invariants(p, r)
            docs.append(invariant_document(rep, res.label, p.generators, cfg.timings))
    return docs, EXIT_OK


def _best_key(rep):
    gb = rep.genus_bound
    if gb is not None:
        return gb[0]
    nb = rep.norm_bound
    return nb if nb is not None else Fraction(-10**9)


def cmd_genus(cfg: RunConfig, entry: KnotTableEntry | None = None):
    res, p = _load(cfg, entry)
    known = cfg.genus
    if known is None and res.entry is not None:
        known = res.entry.known_genus
    deadline = None if cfg.budget is None else time.monotonic() + cfg.budget
    trivial = compute_invariants(p, build_representation(None, "trivial", QQ, p.num_generators))
    classical = trivial.genus_bound
    best = None
    tried = 0
    complete = True
    certified = False
    for k in sorted(cfg.ks):
        remaining = None if deadline is None else max(deadline - time.monotonic(), 1e-3)
        search = search_homs(p, k, SearchOptions(budget=remaining, cycle_type=cfg.cycle_type))
        for h in search:
            for flavor in cfg.flavors:
                for field in _fields(cfg.primes):
                    if flavor == "standard" and k < 2:
                        continue
                    r = build_representation(h if flavor != "trivial" else None, flavor, field, p.num_generators)
                    rep = compute_invariants(p, r)
                    tried += 1
                    if best is None or _best_key(rep) > _best_key(best):
                        best = rep
                    gb = best.genus_bound
                    if known is not None and gb is not None and gb[1] >= known:
                        certified = True
                        break
                    if deadline is not None and time.monotonic() > deadline:
                        complete = False
                        break
                if certified or not complete:
                    break
            if certified or not complete:
                break
        complete = complete and (certified or search.complete)
        if certified or not complete:
            break
    if best is None:
        doc = {"schema": "twistalex-report/1", "input": res.label, "best": None}
    else:
        doc = invariant_document(best, res.label, p.generators, cfg.timings)
    doc["search"] = {
        "ks": list(cfg.ks),
        "primes": list(cfg.primes),
        "flavors": list(cfg.flavors),
        "evaluated": tried,
        "complete": complete,
    }
    doc["knownGenus"] = known
    doc["certified"] = certified
    doc["classicalGenusBound"] = None if classical is None else fraction_text(classical[0])
    code = EXIT_OK if (complete or certified) else EXIT_BUDGET
    return [doc], code


class _HomStream:
    """Chain the searches over several k, exposing ``complete`` afterwards."""

    def __init__(self, p, ks, budget, cycle_type):
        self.p, self.ks, self.cycle_type = p, ks, cycle_type
        self.deadline = None if budget is None else time.monotonic() + budget
        self.complete = True

    def __iter__(self):
        for k in self.ks:
            remaining = None if self.deadline is None else max(self.deadline - time.monotonic(), 1e-3)
            s = search_homs(self.p, k, SearchOptions(budget=remaining, cycle_type=self.cycle_type))
            yield from s
            if not s.complete:
                self.complete = False
                return


def cmd_fiber(cfg: RunConfig, entry: KnotTableEntry | None = None):
    res, p = _load(cfg, entry)
    known = cfg.genus
    if known is None and res.entry is not None:
        known = res.entry.known_genus
    t0 = time.perf_counter()
    if cfg.hom:
        homs = [resolve_hom(cfg.hom, p, cfg.ks[0] if cfg.ks else None)]
    else:
        homs = _HomStream(p, sorted(cfg.ks), cfg.budget, cfg.cycle_type)
    flavors = [f for f in cfg.flavors if f != "trivial"] or ["permutation"]
    verdict = fibering_check(p, homs, cfg.primes, flavors, known_genus=known, budget=cfg.budget)
    doc = verdict_document(verdict, res.label, p.generators, cfg.timings, {"total": time.perf_counter() - t0})
    code = EXIT_OK
    if verdict.status != OBSTRUCTED and not verdict.complete:
        code = EXIT_BUDGET
    return [doc], code


def cmd_search(cfg: RunConfig):
    res, p = _load(cfg)
    docs = []
    code = EXIT_OK
    for k in sorted(cfg.ks):
        s = search_homs(p, k, SearchOptions(budget=cfg.budget, cycle_type=cfg.cycle_type))
        homs = [{g: format_cycles(x) for g, x in zip(p.generators, h.images)} for h in s]
        docs.append({"schema": "twistalex-report/1", "input": res.label, "k": k, "homs": homs, "count": len(homs), "complete": s.complete})
        if not s.complete:
            code = EXIT_BUDGET
    return docs, code


def _batch_task(args):
    cfg, entry = args
    docs, code = (cmd_genus if cfg.mode == "genus" else cmd_fiber)(cfg, entry)
    doc = docs[0]
    doc["exit"] = code
    return doc


def cmd_batch(cfg: RunConfig):
    path = Path(cfg.input) if cfg.input else fixture_path("knots.tsv")
    if not path.is_file():
        path = fixture_path(cfg.input)
    entries = load_table(path)
    if cfg.names:
        unknown = sorted(set(cfg.names) - {e.name for e in entries})
        if unknown:
            raise InputError(f"names not in table: {unknown}")
        entries = [e for e in entries if e.name in cfg.names]
    tasks = [(cfg, e) for e in entries]
    if cfg.workers > 1 and len(tasks) > 1:
        # map preserves task order, so the merged output does not depend on scheduling
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            docs = list(pool.map(_batch_task, tasks))
    else:
        docs = [_batch_task(t) for t in tasks]
    code = max((d.pop("exit") for d in docs), default=EXIT_OK)
    return [docs], code


COMMANDS = {"compute": cmd_compute, "genus": cmd_genus, "fiber": cmd_fiber, "search": cmd_search, "batch": cmd_batch}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistalex", description="Twisted Alexander polynomials, genus bounds and fibering obstructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, k_default, prime_default, flavor_default, input_required=True):
        sp.add_argument("--input", required=input_required, default=None, help="file, fixture name, knot name, or inline 'braid n: ...'")
        sp.add_argument("--hom", help="hom file or fixture (e.g. conway.hom)")
        sp.add_argument("--k", type=_int_list, default=k_default, help="comma-separated permutation degrees")
        sp.add_argument("--prime", type=_int_list, default=prime_default, help="comma-separated primes")
        sp.add_argument("--flavor", type=_flavor_list, default=flavor_default, help="trivial|perm|std, comma-separated")
        sp.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--json", action="store_true", help="structured output")
        sp.add_argument("--longitude", help="zero-surgery along this word ('auto' for braid inputs)")
        sp.add_argument("--genus", type=int, default=None, help="known genus to certify")
        sp.add_argument("--class", dest="cycle_type", default=None, help="restrict meridian images to a cycle type, e.g. 3")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings in reports")

    common(sub.add_parser("compute", help="twisted polynomials for a given hom"), [5], [13], ["standard"])
    common(sub.add_parser("genus", help="search homs for the best genus bound"), [3, 4, 5], [13], ["standard", "permutation"])
    common(sub.add_parser("fiber", help="fibering obstruction search"), [3, 4, 5], list(DEFAULT_PRIMES), ["standard", "permutation"])
    common(sub.add_parser("search", help="list homomorphisms to S_k"), [3], [13], ["standard"])
    bp = sub.add_parser("batch", help="run genus or fiber over a knot table")
    common(bp, [3, 4, 5], [13], ["standard", "permutation"], input_required=False)
    bp.add_argument("--mode", choices=("genus", "fiber"), default="genus")
    bp.add_argument("--names", default="", help="comma-separated subset of table names")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        input=ns.input or "",
        ks=tuple(ns.k),
        primes=tuple(ns.prime),
        flavors=tuple(ns.flavor),
        hom=ns.hom,
        budget=ns.budget,
        workers=ns.workers,
        json=ns.json,
        longitude=ns.longitude,
        genus=ns.genus,
        timings=ns.timings,
        names=tuple(n for n in getattr(ns, "names", "").split(",") if n),
        mode=getattr(ns, "mode", "genus"),
        cycle_type=ns.cycle_type,
    )


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout.buffer
    err = err or sys.stderr
    try:
        cfg.validate()
        docs, code = COMMANDS[cfg.command](cfg)
    except (InputError, PresentationError, ContractError, FileNotFoundError) as e:
        print(f"input error: {e}", file=err)
        return EXIT_INPUT
    except (InvariantError, ArithmeticError) as e:
        print(f"invariant failure: {e}", file=err)
        return EXIT_INVARIANT
    except ValueError as e:
        print(f"input error: {e}", file=err)
        return EXIT_INPUT
    out.write(_render(docs, cfg))
    out.flush()
    return code


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
