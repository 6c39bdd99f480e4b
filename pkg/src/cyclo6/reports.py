"""Structured reports shared by the CLI and the acceptance suite.

Every builder returns plain JSON-ready data wrapped with a header that
records everything needed to reproduce the run. Nothing time- or
scheduling-dependent goes into a report, so reruns are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import random
from functools import partial
from importlib import resources
from pathlib import Path

from . import __version__
from . import ads_search, cyclo6_formulas, distance, sequences
from .field_core import CyclotomyError, build_context, cyclotomic_number_bruteforce, odd_primes
from .parallel import ordered_imap

log = logging.getLogger(__name__)

CLASS_ELIDE_THRESHOLD = 16


def header(command: str, config: dict) -> dict:
    return {"tool": "cyclo6", "version": __version__, "command": command, "config": config}


def wrap(command, config, result):
    return {"header": header(command, config), "result": result}


def dumps(report) -> str:
    return json.dumps(report, indent=2) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("cyclo6").joinpath("schema/report.schema.json").read_text())


def validate(report) -> None:
    import jsonschema

    jsonschema.validate(report, load_schema())


# -- prime selection ---------------------------------------------------------


def parse_range(text: str) -> tuple[int, int]:
    """``"13"`` or ``"13..2000"`` -> inclusive bounds."""
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise ValueError(f"bad prime range {text!r}; use P or LO..HI") from None
    if lo_i < 1 or hi_i < lo_i:
        raise ValueError(f"bad prime range {text!r}; bounds must be positive and ordered")
    return lo_i, hi_i


def select_primes(lo: int, hi: int, modulus: int):
    """Qualifying primes and, for a single-value range, why it was skipped."""
    primes = odd_primes(lo, hi, modulus, 1)
    skipped = []
    if lo == hi and not primes:
        skipped.append({"p": lo, "reason": f"not a prime congruent to 1 mod {modulus}"})
    return primes, skipped


# -- classes / cyclotomic numbers -------------------------------------------


def classes_report(p: int, d: int, full: bool = False) -> dict:
    ctx = build_context(p, d)
    body = ctx.to_dict(full=True)
    elided = not full and ctx.f > CLASS_ELIDE_THRESHOLD
    if elided:
        body["classes"] = [c[:CLASS_ELIDE_THRESHOLD] for c in body["classes"]]
    body["elided"] = elided
    return wrap("classes", {"p": p, "d": d, "full": full}, body)


def cyclo_numbers_report(p: int, d: int, mode: str = "both") -> dict:
    ctx = build_context(p, d)
    if mode in ("formula", "both") and not (d == 6 and ctx.has_order6_formulas):
        raise CyclotomyError("closed forms available only for d=6, f even")
    oracle = formula = None
    if mode in ("oracle", "both"):
        oracle = [[cyclotomic_number_bruteforce(ctx, i, j) for j in range(d)] for i in range(d)]
    if mode in ("formula", "both"):
        formula = [
            [cyclo6_formulas.cyclotomic_number_formula(ctx, i, j) for j in range(d)]
            for i in range(d)
        ]
    mismatches = 0
    if oracle and formula:
        mismatches = sum(a != b for ra, rb in zip(oracle, formula) for a, b in zip(ra, rb))
    body = {
        "context": ctx.to_dict(full=False),
        "mode": mode,
        "oracle": oracle,
        "formula": formula,
        "mismatches": mismatches,
    }
    return wrap("cyclo-numbers", {"p": p, "d": d, "mode": mode}, body)


# -- formula verification ----------------------------------------------------


def _verify_one(p):
    return cyclo6_formulas.verify_formulas(build_context(p, 6))


def verify_formulas_report(lo: int, hi: int, jobs: int = 1, min_primes: int = 25) -> dict:
    primes, skipped = select_primes(lo, hi, 12)
    reports = list(ordered_imap(_verify_one, primes, jobs))
    errata = cyclo6_formulas.establish_errata(reports, min_primes=min_primes)
    errata_rows = []
    for (source, m3, case), info in errata.items():
        if source == "d_C":
            w1, _, rest = case.partition(",")
            h = rest.split("=")[1]
            printed = cyclo6_formulas.printed_dC_formula(
                m3, int(w1.split("=")[1]), None if rest.startswith("w2") else int(h)
            )
        elif source == "table2":
            h, k = map(int, case.strip("()").split(","))
            printed = cyclo6_formulas.table2_formula(m3, h, k)
        else:
            printed = cyclo6_formulas.printed_lemma_formula(m3, source, int(case.split("=")[1]))
        errata_rows.append(
            {
                "source": source,
                "m_mod3": m3,
                "case": case,
                "primes": info["primes"],
                "mismatches": info["mismatches"],
                "persistent": info["persistent"],
                "printed": str(printed),
                "fitted": None if info["fitted"] is None else str(info["fitted"]),
                "corrected": None if info["corrected"] is None else str(info["corrected"]),
            }
        )
    body = {"primes": [r.to_dict() for r in reports], "skipped": skipped, "errata": errata_rows}
    config = {"range": [lo, hi], "min_primes": min_primes}
    return wrap("verify-formulas", config, body)


# -- search ------------------------------------------------------------------


def _search_task(p, d, k_values, variants, mixed, rows):
    return ads_search.search_prime(p, d, k_values, variants, mixed, keep_rows=rows).to_dict()


def _checkpoint_path(out_dir: Path, p: int) -> Path:
    return out_dir / f"p{p:08d}.json"


def search_report(
    lo: int,
    hi: int,
    d: int = 6,
    k_values=None,
    variants=distance.VARIANTS,
    mixed: bool = True,
    rows: bool = False,
    jobs: int = 1,
    modulus: int | None = None,
    out_dir: Path | None = None,
    resume: bool = False,
) -> dict:
    """Sweep every qualifying prime in ``[lo, hi]``.

    With ``out_dir`` each prime's result is written as it completes, plus a
    rolling ``summary.json``; ``resume`` reuses per-prime files already there.
    """
    modulus = modulus or (12 if d == 6 else d)
    primes, skipped = select_primes(lo, hi, modulus)
    k_values = None if k_values is None else sorted(set(k_values))
    variants = [v for v in distance.VARIANTS if v in set(variants)]
    config = {
        "range": [lo, hi],
        "d": d,
        "modulus": modulus,
        "k_values": k_values,
        "variants": variants,
        "mixed": mixed,
        "rows": rows,
    }

    done = {}
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        if resume:
            for p in primes:
                path = _checkpoint_path(out_dir, p)
                if path.exists():
                    done[p] = json.loads(path.read_text())
                    log.info("resumed p=%d from %s", p, path)

    todo = [p for p in primes if p not in done]
    task = partial(_search_task, d=d, k_values=k_values, variants=variants, mixed=mixed, rows=rows)
    for p, res in zip(todo, ordered_imap(task, todo, jobs)):
        done[p] = res
        log.info("p=%d rows=%d hits=%d", p, res["rows"], res["hit_count"])
        if out_dir is not None:
            _checkpoint_path(out_dir, p).write_text(json.dumps(res, indent=2) + "\n")
            summary = {
                "config": config,
                "completed": sorted(done),
                "total_hits": sum(r["hit_count"] for r in done.values()),
            }
            (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")

    per_prime = [done[p] for p in primes]
    skipped = skipped + [{"p": r["p"], "reason": r["error"]} for r in per_prime if r["error"]]
    total_hits = sum(r["hit_count"] for r in per_prime)
    body = {
        "d": d,
        "prime_count": len(primes),
        "total_rows": sum(r["rows"] for r in per_prime),
        "total_hits": total_hits,
        # only an order-6 hit contradicts the nonexistence result
        "counterexample": d == 6 and total_hits > 0,
        "primes": per_prime,
        "skipped": skipped,
    }
    return wrap("search", config, body)


# -- sequences ---------------------------------------------------------------


def acf_report(p: int, I, J, variant: str = distance.C, d: int = 6) -> dict:
    ctx = build_context(p, d)
    support = distance.build_dhm_support(ctx, I, J, variant)
    seq = sequences.support_to_sequence(support)
    acf = sequences.periodic_autocorrelation(seq)
    levels = sequences.classify_levels(acf)
    body = acf.to_dict()
    body["level_count"] = levels.count
    body["three_level"] = levels.three_level
    body["bits"] = seq.bits()
    body["ads"] = ads_search.classify_ads(support).to_dict()
    config = {"p": p, "d": d, "I": list(I), "J": list(J), "variant": variant}
    return wrap("acf", config, body)


def lemma8_report(p: int, variant: str = distance.C) -> dict:
    ctx = build_context(p, 6)
    rep = ads_search.verify_lemma8(ctx, variant)
    return wrap("lemma8", {"p": p, "variant": variant}, rep.to_dict())


def _fast_path_task(args):
    p, d, picks = args
    ctx = build_context(p, d)
    bad = []
    for I, J, v in picks:
        fast = ads_search.fast_spectrum(ctx, I, J, v)
        slow = distance.spectrum(distance.build_dhm_support(ctx, I, J, v))
        if fast != slow:
            bad.append({"I": list(I), "J": list(J), "variant": v})
    return {"p": p, "checked": len(picks), "mismatches": bad}


def fast_path_report(
    lo: int, hi: int, d: int = 6, sample: float = 0.05, seed: int = 0, jobs: int = 1,
    full_below: int = 100,
) -> dict:
    """Compare class-route spectra with direct spectra on sampled rows.

    Every row is checked for ``p < full_below``; above it a seeded sample.
    """
    modulus = 12 if d == 6 else d
    primes, skipped = select_primes(lo, hi, modulus)
    rng = random.Random(seed)
    tasks = []
    for p in primes:
        rows = [
            (I, J, v)
            for I, J in ads_search.iter_pairs(d, mixed=True)
            for v in distance.VARIANTS
        ]
        if p >= full_below:
            rows = [r for r in rows if rng.random() < sample]
        tasks.append((p, d, rows))
    per_prime = list(ordered_imap(_fast_path_task, tasks, jobs))
    body = {
        "primes": per_prime,
        "checked": sum(r["checked"] for r in per_prime),
        "mismatch_count": sum(len(r["mismatches"]) for r in per_prime),
        "skipped": skipped,
    }
    config = {"range": [lo, hi], "d": d, "sample": sample, "seed": seed, "full_below": full_below}
    return wrap("check-fast-path", config, body)


# -- text renderings ---------------------------------------------------------


def _table(headers, rows) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _header_text(h) -> str:
    cfg = " ".join(f"{k}={v}" for k, v in h["config"].items())
    return f"# cyclo6 {h['version']} {h['command']} {cfg}\n"


def render_human(report) -> str:
    h, r = report["header"], report["result"]
    cmd = h["command"]
    out = [_header_text(h)]
    if cmd == "classes":
        out.append(f"p={r['p']} d={r['d']} f={r['f']} alpha={r['alpha']} "
                   f"A={r['A']} B={r['B']} m_mod3={r['m_mod3']}\n")
        rows = [(f"D_{i}", " ".join(map(str, c)) + (" ..." if r["elided"] else ""))
                for i, c in enumerate(r["classes"])]
        out.append(_table(["class", "elements"], rows))
    elif cmd == "cyclo-numbers":
        ctx = r["context"]
        out.append(f"p={ctx['p']} d={ctx['d']} alpha={ctx['alpha']} A={ctx['A']} "
                   f"B={ctx['B']} m_mod3={ctx['m_mod3']}\n")
        for name in ("oracle", "formula"):
            if r[name] is not None:
                out.append(f"[{name}]\n")
                out.append(_table(["(h,k)"] + list(range(ctx["d"])),
                                  [[i] + row for i, row in enumerate(r[name])]))
        out.append(f"mismatches: {r['mismatches']}\n")
    elif cmd == "verify-formulas":
        rows = []
        for rep in r["primes"]:
            for c in rep["checks"]:
                if c["source"] == "table2":
                    continue
                rows.append((rep["p"], rep["m_mod3"], c["source"], c["case"],
                             c["printed"], c["oracle"], "ok" if c["match"] else "MISMATCH"))
        summary = [(rep["p"], rep["A"], rep["B"], rep["m_mod3"],
                    sum(c["match"] for c in rep["checks"] if c["source"] == "table2"),
                    rep["mismatch_count"]) for rep in r["primes"]]
        out.append(_table(["p", "A", "B", "m_mod3", "table2_ok", "mismatches"], summary))
        bad = [row for row in rows if row[-1] != "ok"]
        if bad:
            out.append("\nmismatching entries\n")
            out.append(_table(["p", "m_mod3", "source", "case", "printed", "oracle", ""], bad))
        for e in r["errata"]:
            out.append(f"\nerratum {e['source']} m_mod3={e['m_mod3']} {e['case']}: printed "
                       f"{e['printed']}; fits {e['fitted']} at {e['mismatches']}/{e['primes']} "
                       f"primes (corrected: {e['corrected']})\n")
    elif cmd == "search":
        rows = [(x["p"], x["alpha"], x["A"], x["B"], x["m_mod3"], x["rows"], x["hit_count"])
                for x in r["primes"]]
        out.append(_table(["p", "alpha", "A", "B", "m_mod3", "rows", "hits"], rows))
        hits = [(x["p"], ",".join(map(str, hh["I"])), ",".join(map(str, hh["J"])), hh["variant"],
                 hh["classification"], hh["parameters"]) for x in r["primes"] for hh in x["hits"]]
        if hits:
            out.append("\n" + _table(["p", "I", "J", "variant", "class", "parameters"], hits))
        out.append(f"\nprimes={r['prime_count']} rows={r['total_rows']} hits={r['total_hits']}"
                   + (" COUNTEREXAMPLE" if r["counterexample"] else "") + "\n")
    elif cmd == "acf":
        out.append(f"period={r['period']} peak={r['peak']} levels={r['level_count']} "
                   f"three_level={r['three_level']} "
                   f"offpeak={r['levels']} ads={r['ads']['classification']} "
                   f"{r['ads']['parameters'] or ''}\n")
        out.append(_table(["shift", "acf"], list(enumerate(r["values"]))))
    elif cmd == "lemma8":
        ads = r["ads"]
        out.append(f"p={r['p']} m_mod3={r['m_mod3']} {ads['classification']}\n")
        out.append(_table(["d_C", "count"], sorted(ads["spectrum"]["histogram"].items(),
                                                    key=lambda kv: int(kv[0]))))
        out.append(_table(["case", "closed form"], list(r["closed_form"].items())))
    elif cmd == "check-fast-path":
        out.append(_table(["p", "checked", "mismatches"],
                          [(x["p"], x["checked"], len(x["mismatches"])) for x in r["primes"]]))
        out.append(f"checked={r['checked']} mismatches={r['mismatch_count']}\n")
    for sk in r.get("skipped", []) if isinstance(r, dict) else []:
        out.append(f"skipped p={sk['p']}: {sk['reason']}\n")
    return "".join(out)


def render_csv(report) -> str:
    h, r = report["header"], report["result"]
    cmd = h["command"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if cmd == "classes":
        w.writerow(["class", "element"])
        for i, c in enumerate(r["classes"]):
            for x in c:
                w.writerow([i, x])
    elif cmd == "cyclo-numbers":
        w.writerow(["h", "k", "oracle", "formula"])
        d = r["context"]["d"]
        for i in range(d):
            for j in range(d):
                w.writerow([i, j,
                            "" if r["oracle"] is None else r["oracle"][i][j],
                            "" if r["formula"] is None else r["formula"][i][j]])
    elif cmd == "verify-formulas":
        w.writerow(["p", "m_mod3", "A", "B", "source", "case", "printed", "oracle", "derived", "match"])
        for rep in r["primes"]:
            for c in rep["checks"]:
                w.writerow([rep["p"], rep["m_mod3"], rep["A"], rep["B"], c["source"], c["case"],
                            c["printed"], c["oracle"], c["derived"] or "", int(c["match"])])
    elif cmd == "search":
        w.writerow(["p", "d", "I", "J", "variant", "classification", "n", "k", "lambda", "t"])
        for x in r["primes"]:
            for row in x.get("all_rows", x["hits"]):
                params = (row["parameters"] or []) + [""] * 4
                w.writerow([x["p"], x["d"], " ".join(map(str, row["I"])),
                            " ".join(map(str, row["J"])), row["variant"],
                            row["classification"], *params[:4]])
    elif cmd == "acf":
        w.writerow(["shift", "correlation"])
        for tau, v in enumerate(r["values"]):
            w.writerow([tau, v])
    elif cmd == "lemma8":
        w.writerow(["distance", "count"])
        for v, c in sorted(r["ads"]["spectrum"]["histogram"].items(), key=lambda kv: int(kv[0])):
            w.writerow([v, c])
    elif cmd == "check-fast-path":
        w.writerow(["p", "checked", "mismatches"])
        for x in r["primes"]:
            w.writerow([x["p"], x["checked"], len(x["mismatches"])])
    return buf.getvalue()


def render(report, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    if fmt == "csv":
        return render_csv(report)
    return render_human(report)
