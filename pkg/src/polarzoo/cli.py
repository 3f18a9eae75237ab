"""Command line: catalog | construct | verify | graph | switch | scheme | code | replay."""
from __future__ import annotations

import argparse
import json
import re
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import codes, constructions as cons, graphs as gr, schemes as sch, switching as sw
from .certificates import Certificate, make_certificate, sha256_file
from .gf import FieldError, field_of_order
from .polar import Form, FormError, PolarSpace, parse_descriptor, polar_space
from .projspace import BudgetExceeded
from .report import bar_figure, block, spectrum_figure

EXIT = {"verified": 0, "refuted": 1, "inconclusive": 1, "budget_exhausted": 2}


class UsageError(ValueError):
    pass


@dataclass
class Outcome:
    stem: str
    title: str
    cert: Certificate
    rows: dict = field(default_factory=dict)
    figure: object = None  # callable(path) drawing the figure
    files: dict = field(default_factory=dict)  # name -> text content


# file formats

def write_points(P) -> str:
    return "".join(" ".join(map(str, r)) + "\n" for r in np.asarray(P).tolist())


def read_points(path) -> np.ndarray:
    rows = [list(map(int, ln.split())) for ln in _content_lines(path)]
    return np.array(rows, dtype=np.int64)


def write_subspaces(ps: PolarSpace, id_rows) -> str:
    """One subspace per line: basis vectors separated by '|'."""
    out = []
    for row in np.asarray(id_rows):
        S = ps.subspace_from_ids(row)
        out.append(" | ".join(" ".join(map(str, v)) for v in S.basis.tolist()))
    return "".join(ln + "\n" for ln in out)


def read_subspaces(ps: PolarSpace, path) -> np.ndarray:
    from .projspace import Subspace

    rows = []
    for ln in _content_lines(path):
        vecs = np.array([list(map(int, part.split())) for part in ln.split("|")], dtype=np.int64)
        if vecs.shape[1] != ps.n + 1:
            raise UsageError(f"vector length {vecs.shape[1]} does not fit {ps.label}")
        rows.append(Subspace(ps.F, ps.n, vecs))
    return cons._member_point_ids(ps, rows)


def _content_lines(path) -> list[str]:
    text = Path(path).read_text()
    return [ln.split("#")[0].strip() for ln in text.splitlines() if ln.split("#")[0].strip()]


def form_json(ps_or_form, family: str | None = None) -> str:
    f = ps_or_form.form if isinstance(ps_or_form, PolarSpace) else ps_or_form
    fam = family or (ps_or_form.family if isinstance(ps_or_form, PolarSpace) else None)
    return json.dumps({"field": f.F.q, "kind": f.kind, "family": fam, "gram": np.asarray(f.gram).tolist()},
                      sort_keys=True) + "\n"


def space_from_args(args) -> PolarSpace:
    if getattr(args, "form", None):
        d = json.loads(Path(args.form).read_text())
        F = field_of_order(d["field"])
        return PolarSpace(Form(F, d["kind"], np.array(d["gram"], dtype=np.int64)), d.get("family"))
    if getattr(args, "space", None):
        return parse_descriptor(args.space)
    raise UsageError("give --space DESCRIPTOR or --form FILE")


def compact(label: str) -> str:
    return re.sub(r"[^0-9A-Za-z+-]", "", label.replace(",", "q"))


# commands

def cmd_catalog(args) -> Outcome:
    t0 = time.perf_counter()
    ps = polar_space(args.family, args.d, args.q, budget=args.budget_nodes)
    levels, ok = {}, True
    for k in range(1, ps.d + 1):
        want = ps.formula_count(k)
        got = len(ps.level(k)) if want <= args.budget_nodes else None
        levels[k] = {"formula": want, "enumerated": got}
        ok &= got is None or got == want
    rows = {"space": ps.label, "rank": ps.d, "e": str(ps.e), "points": levels[1]["formula"],
            "generators": levels[ps.d]["formula"], "ovoid_number": ps.ovoid_number()}
    if ps.d == 2:
        rows["gq_order"] = list(ps.gq_params())
    rows["levels"] = levels
    cert = make_certificate(f"catalog-{compact(ps.label)}", {"family": args.family, "d": args.d, "q": args.q},
                            ok, data=rows, started=t0)
    fig = lambda p: bar_figure(p, f"totally isotropic subspaces of {ps.label}",  # noqa: E731
                               {f"k={k}": v["formula"] for k, v in levels.items()}, "projective dimension + 1", log=True)
    return Outcome(f"catalog-{compact(ps.label)}", f"catalog {ps.label}", cert, rows, fig)


def _search_budget(args) -> dict:
    return {"budget_nodes": args.budget_nodes, "budget_seconds": args.budget_seconds}


def cmd_construct(args) -> Outcome:
    name = args.name
    t0 = time.perf_counter()
    files: dict = {}
    if name == "segre-hemisystem":
        ps = parse_descriptor(args.space or "H:3:q2=9")
        res = cons.search_hemisystem(ps, **_search_budget(args))
        if res["status"] == "budget_exhausted":
            raise BudgetExceeded(f"search stopped after {res['nodes']} nodes")
        if res["status"] != "found":
            cert = make_certificate(f"segre-hemisystem-{compact(ps.label)}", {"space": ps.label}, False,
                                    data={"status": res["status"], "exhaustive": res["exhaustive"]},
                                    counters={"nodes": res["nodes"]}, started=t0)
            return Outcome(cert.claim_id, f"construct {name}", cert, cert.data)
        check = cons.verify_regular_system(ps, res["system"], 1)
        files["lines"] = write_subspaces(ps, res["system"])
        rows = {"space": ps.label, "lines": len(res["system"]), "m": check["m"], "nodes": res["nodes"]}
        cert = make_certificate(f"segre-hemisystem-{compact(ps.label)}", {"space": ps.label}, check.ok,
                                data=rows, counters={"nodes": res["nodes"]}, started=t0)
        hist = np.bincount(np.bincount(res["system"].ravel(), minlength=len(ps.points)))
        fig = lambda p: bar_figure(p, "members through each point", dict(enumerate(hist.tolist())), "members")  # noqa: E731
        return Outcome(cert.claim_id, f"construct {name}", cert, rows, fig, files)
    if name == "elliptic-hemisystem":
        q = args.q or 3
        eh = cons.elliptic_hemisystem(q)
        ps = eh["space"]
        check = cons.verify_regular_system(ps, eh["system"], 1)
        files["lines"] = write_subspaces(ps, eh["system"])
        rows = {"space": ps.label, "sections": eh["sizes"]["total"], "lines": len(eh["system"]), "m": check["m"]}
        if args.lift:
            up = sch.chain_lift(ps, eh["system"], "up", 1)
            files["lift.planes"] = write_subspaces(up["space"], up["members"])
            files["lift.form.json"] = form_json(up["space"])
            rows.update(lift_space=up["space"].label, lift_size=up["certificate"]["size"],
                        lift_m=up["certificate"]["m"])
            ok = check.ok and up["certificate"].ok
        else:
            ok = check.ok
        cert = make_certificate(f"elliptic-hemisystem-Q-5q{q}", {"q": q, "lift": args.lift}, ok, data=rows, started=t0)
        return Outcome(cert.claim_id, f"construct {name}", cert, rows, None, files)
    if name == "one-system":
        o = cons.q63_one_system()
        ps = o["space"]
        one = cons.verify_one_system(ps, o["S"], o["planes"])
        planes = cons.planes_through_lines(o["planes"], np.vstack([o["S"], o["S_opp"]]), len(ps.points))
        c8 = cons.verify_regular_system(ps, planes, 1)
        files.update({"lines": write_subspaces(ps, o["S"]), "planes": write_subspaces(ps, planes),
                      "form.json": form_json(ps)})
        rows = {"space": ps.label, "lines": len(o["S"]), "one_system": one.ok, "planes": len(planes), "m": c8["m"]}
        cert = make_certificate("one-system-Q6q3", {}, one.ok and c8.ok, data=rows, started=t0)
        return Outcome(cert.claim_id, f"construct {name}", cert, rows, None, files)
    builders = {
        "twisted-cubic": lambda q: cons.twisted_cubic_partial_ovoid(q or 25),
        "w5-cyclic": lambda q: cons.w5_cyclic_partial_ovoid(q or 2),
        "w5-even": lambda q: cons.w5_even_partial_ovoid(q or 4),
        "hermitian-lift": lambda q: cons.hermitian_lift(cons.tangent_set(q or 2)),
    }
    if name in builders:
        po = builders[name](args.q)
        ps = po.space
        cert0 = cons.verify_partial_ovoid(ps, po.points)
        ext = cons.extension_points(ps, po.points) if cert0.ok else np.zeros(0, dtype=np.int64)
        files.update({"points": write_points(po.points), "form.json": form_json(ps)})
        rows = {"space": ps.label, "size": len(po), "partial_ovoid": cert0.ok, "maximal": len(ext) == 0,
                "extension_points": len(ext)}
        witness = {"extension_point": ps.points[ext[0]].tolist()} if len(ext) else {}
        cert = make_certificate(f"{name}-{compact(ps.label)}", {"q": args.q}, cert0.ok, data=rows,
                                witness=witness, started=t0)
        return Outcome(cert.claim_id, f"construct {name}", cert, rows, None, files)
    if name == "tangent-set":
        T = cons.tangent_set(args.q or 2)
        tc = cons.verify_tangent_set(T, check_maximal=True)
        files.update({"points": write_points(T.points), "form.json": form_json(T.form, "H")})
        rows = {"q": T.q, "size": len(T.points), **{k: v for k, v in tc.data.items() if k != "lines"}}
        cert = make_certificate(f"tangent-set-q{T.q}", {"q": T.q}, tc["pairs_ok"] and tc.data.get("lines_ok", True),
                                data=rows, started=t0)
        return Outcome(cert.claim_id, f"construct {name}", cert, rows, None, files)
    if name == "unital":
        q = args.q or 3
        U = cons.make_unital(args.kind, q)
        uc = cons.verify_unital(U)
        files["points"] = write_points(U.points)
        rows = {"kind": U.kind, "q": q, **uc.data, **U.info}
        cert = make_certificate(f"unital-{U.kind}-q{q}", {"kind": U.kind, "q": q}, uc.ok, data=rows, started=t0)
        fig = lambda p: bar_figure(p, "lines by intersection size", uc["line_meets"], "points on line")  # noqa: E731
        return Outcome(cert.claim_id, f"construct {name}", cert, rows, fig, files)
    raise UsageError(f"unknown construction {name!r}")


def cmd_verify(args) -> Outcome:
    claim, path = args.claim, args.file
    t0 = time.perf_counter()
    if claim == "regular-system":
        ps = space_from_args(args)
        gens = read_subspaces(ps, path)
        c = cons.verify_regular_system(ps, gens, args.k)
        rows = {"space": ps.label, "k": args.k, **c.data}
    elif claim == "partial-ovoid":
        ps = space_from_args(args)
        c = cons.verify_partial_ovoid(ps, read_points(path), check_maximal=args.maximal)
        rows = {"space": ps.label, **c.data}
    elif claim == "one-system":
        ps = space_from_args(args)
        c = cons.verify_one_system(ps, read_subspaces(ps, path))
        rows = {"space": ps.label, **c.data}
    elif claim == "srg":
        G = load_graph(path, args.n)
        c = gr.srg_certificate(G, tuple(args.params) if args.params else None)
        rows = {"n": G.n, **c.data}
    elif claim == "two-weight":
        if not args.q:
            raise UsageError("two-weight needs --q")
        S = codes.projective_set(field_of_order(args.q), read_points(path))
        c = codes.two_weight_certify(codes.code_from_set(S))
        rows = dict(c.data)
    elif claim == "unital":
        if not args.q:
            raise UsageError("unital needs --q")
        pts = read_points(path)
        U = _unital_from_points(args.q, pts)
        c = cons.verify_unital(U)
        rows = dict(c.data)
    else:
        raise UsageError(f"unknown claim {claim!r}")
    c.counters.setdefault("file_sha256", sha256_file(path))
    c.wall_time = time.perf_counter() - t0
    return Outcome(f"verify-{claim}", f"verify {claim}", c, rows)


def _unital_from_points(q: int, pts: np.ndarray):
    K = field_of_order(q * q)
    from . import linalg
    from .projspace import enumerate_point_array

    pts = np.unique(linalg.normalize_rows(K, pts), axis=0)
    inc = cons._plane_incidence(K, pts, enumerate_point_array(K, 2))
    sec = inc.sum(axis=0) == q + 1
    blocks = [tuple(np.nonzero(inc[:, j])[0].tolist()) for j in np.nonzero(sec)[0]]
    return cons.Unital("file", q, pts, blocks, {})


def load_graph(path, n: int | None = None) -> gr.Graph:
    text = Path(path).read_text()
    first = text.split("\n", 1)[0].split()
    if len(first) == 1:
        return gr.from_bitrows(text)
    pairs = [tuple(map(int, ln.split())) for ln in text.splitlines() if ln.strip()]
    size = n if n is not None else (1 + max(max(p) for p in pairs) if pairs else 0)
    return gr.from_edge_list(text, size)


def build_graph(args) -> tuple[gr.Graph, list[int] | None, str]:
    fam = args.family
    if fam == "nu":
        return gr.nu_graph(args.n or 3, args.q or 2), None, f"NU({args.n or 3},{(args.q or 2) ** 2})"
    if fam == "collinearity":
        ps = space_from_args(args)
        return gr.collinearity_graph(ps), None, f"collinearity {ps.label}"
    if fam == "dual-polar":
        ps = space_from_args(args)
        i = args.i or 1
        return gr.dual_polar_graph(ps, i), sch.distance_eigenvalues(ps.d, ps.e, ps.q, i), f"D^{i} {ps.label}"
    if fam == "hemisystem-line":
        ps = parse_descriptor(args.space or "H:3:q2=9")
        res = cons.search_hemisystem(ps, **_search_budget(args))
        if res["status"] != "found":
            raise BudgetExceeded("no hemisystem found within budget")
        return gr.hemisystem_line_graph(ps, res["indices"]), None, f"hemisystem line graph {ps.label}"
    if fam == "unital":
        q = args.q or 3
        return gr.unital_graph(cons.make_unital(args.kind, q)), None, f"unital graph {args.kind} q={q}"
    if fam == "linear-rep":
        ps = polar_space("H", 2, 9)
        res = cons.search_hemisystem(ps, **_search_budget(args))
        S, _ = codes.klein_image(ps, res["system"])
        return gr.linear_representation_graph(S.F, S.points), None, "linear representation of the hemisystem"
    if fam == "file":
        if not args.input:
            raise UsageError("graph file needs --input")
        return load_graph(args.input, args.n), None, f"graph from {Path(args.input).name}"
    raise UsageError(f"unknown graph family {fam!r}")


def cmd_graph(args) -> Outcome:
    t0 = time.perf_counter()
    G, eig, title = build_graph(args)
    c = gr.srg_certificate(G, tuple(args.params) if args.params else None)
    rows = {"graph": title, "vertices": G.n, "edges": int(G.adj.sum() // 2), **c.data}
    spectrum = None
    if eig is None and c.data.get("params"):
        p = gr.SrgParams(*c.data["params"])
        ev = p.eigenvalues()
        if ev is not None:
            eig = [p.k, *ev]
    if eig is not None and G.n:
        spectrum = gr.spectrum_certify(G, eig)
        rows["spectrum"] = {"eigenvalues": spectrum.eigenvalues, "multiplicities": [int(m) for m in spectrum.multiplicities],
                            "certified": spectrum.ok}
        if args.family == "dual-polar":
            c = make_certificate("spectrum", {"graph": title}, spectrum.ok, data=rows, started=t0)
    if args.aut:
        rows["automorphisms"] = gr.automorphism_count(G)
    if args.triples:
        rows["triple_census"] = dict(sorted(gr.triple_census(G).items()))
    if args.cliques:
        cen = gr.clique_census(G, args.budget_nodes)
        rows["maximal_cliques"] = cen["histogram"]
    if args.coclique:
        rows["coclique"] = {k: v for k, v in gr.coclique_search(G, args.coclique, args.budget_nodes).items()}
    c.data.update(rows)
    files = {"edges" if args.edges else "graph": gr.to_edge_list(G) if args.edges else gr.to_bitrows(G)}
    stem = "graph-" + compact(title.replace(" ", "-"))

    def fig(p):
        if spectrum is not None:
            return spectrum_figure(p, title, spectrum.eigenvalues, spectrum.multiplicities)
        return bar_figure(p, title, dict(zip(*np.unique(G.degrees(), return_counts=True))), "degree")

    return Outcome(stem, f"graph {title}", c, rows, fig, files)


def cmd_switch(args) -> Outcome:
    H, cfg, G = sw.build_switched_nu(args.n, args.q, args.type)
    cert = sw.certify_cospectral_nonisomorphic(G, H, cfg)
    rows = {"n": args.n, "q": args.q, "type": args.type, "P": cfg.P, "line1": cfg.line1, "line2": cfg.line2,
            **cfg.info, **cert.data}
    cert.data.update({k: v for k, v in rows.items() if k not in cert.data})
    cert.parameters.update(n=args.n, q=args.q, type=args.type)
    files = {"graph": gr.to_bitrows(H)}
    series = {"base": cert.data.get("census_G", {}), "switched": cert.data.get("census_H", {})}
    fig = lambda p: bar_figure(p, "triple census", series, "common neighbours", log=True)  # noqa: E731
    return Outcome(f"switch-n{args.n}-q{args.q}-{args.type}", "switch", cert, rows, fig, files)


def cmd_scheme(args) -> Outcome:
    t0 = time.perf_counter()
    ps = space_from_args(args)
    S = sch.scheme_from_polar(ps, budget=args.budget_nodes)
    idem = sch.minimal_idempotents(S)
    krein = sch.krein_parameters(idem, S.n)
    spectra = {}
    for i in range(1, S.d + 1):
        r = sch.certify_distance_spectrum(ps, i, S.info["meets"])
        spectra[f"D{i}"] = {"eigenvalues": r["eigenvalues"], "multiplicities": [int(m) for m in r["multiplicities"]],
                            "ok": r["ok"], "smallest_is_last": r["smallest_is_last"]}
    strata = sch.strata_order_check(S, idem)
    rows = {"space": ps.label, "generators": S.n, "valencies": S.valencies(), "axioms": S.info["axioms"],
            "P": idem.P, "multiplicities": [int(m) for m in idem.multiplicities],
            "krein_nonnegative": bool((np.asarray(krein) >= 0).all()), "idempotent_checks": idem.checks,
            "strata_order": strata, "spectra": spectra}
    ok = S.info["ok"] and all(idem.checks.values()) and rows["krein_nonnegative"] and all(
        s["ok"] for s in spectra.values()) and all(strata.values())
    if args.system:
        members = read_subspaces(ps, args.system)
        pos = {tuple(r): t for t, r in enumerate(np.sort(S.gens, axis=1).tolist())}
        ids = [pos[tuple(r)] for r in np.sort(members, axis=1).tolist()]
        chi = sch.characteristic_vector(S.n, ids)
        rows["system"] = {"size": len(ids), "dual_degree_set": sorted(sch.dual_degree_set(idem, chi))}
    cert = make_certificate(f"scheme-{compact(ps.label)}", {"space": ps.label}, ok, data=rows, started=t0)
    fig = lambda p: bar_figure(p, f"strata of {ps.label}", {f"E{j}": int(m) for j, m in enumerate(idem.multiplicities)},  # noqa: E731
                               "stratum", "multiplicity")
    return Outcome(cert.claim_id, f"scheme {ps.label}", cert, rows, fig)


def cmd_code(args) -> Outcome:
    t0 = time.perf_counter()
    if args.file in (None, "hemisystem"):
        ps = polar_space("H", 2, 9)
        res = cons.search_hemisystem(ps, **_search_budget(args))
        S, _ = codes.klein_image(ps, res["system"])
        name = "hemisystem"
    else:
        if not args.q:
            raise UsageError("code needs --q for a point file")
        S = codes.projective_set(field_of_order(args.q), read_points(args.file))
        name = Path(args.file).stem
    C = codes.code_from_set(S)
    tw = codes.two_weight_certify(C, args.budget_nodes)
    rows = dict(tw.data)
    rows["hyperplane_counts"] = dict(sorted(codes.hyperplane_counts(S).items()))
    rows["weight_section_identity"] = codes.weight_section_identity(S, C)
    cert = tw
    if S.F.q**S.k <= min(args.budget_nodes, 20_000) and args.bridge:
        cert = codes.srg_code_bridge(S)
        rows.update(cert.data)
        cert.data.update(rows)
    files = {"generator.csv": "".join(",".join(map(str, r)) + "\n" for r in C.G.tolist()),
             "weights.json": json.dumps({str(k): v for k, v in tw["distribution"].items()}, sort_keys=True) + "\n",
             "points": write_points(S.points)}
    cert.wall_time = time.perf_counter() - t0
    fig = lambda p: bar_figure(p, f"weight distribution [{C.n},{C.k}]_{C.F.q}", tw["distribution"], "weight", log=True)  # noqa: E731
    return Outcome(f"code-{name}", f"code {name}", cert, rows, fig, files)


def cmd_replay(args) -> Outcome:
    t0 = time.perf_counter()
    if args.dir is None:
        from .acceptance import run_all

        lines: list[str] = []
        res = run_all(args.only, log=lambda s: (lines.append(s), print(s, file=sys.stderr)))
        rows = {name: "PASS" if r["ok"] else "FAIL" for name, r in res.items()}
        ok = all(r["ok"] for r in res.values())
        cert = make_certificate("acceptance", {"only": args.only}, ok, data={
            name: {"ok": r["ok"], "detail": r["detail"]} for name, r in res.items()}, started=t0)
        fig = lambda p: bar_figure(p, "acceptance wall time", {n.split()[0]: r["wall"] for n, r in res.items()},  # noqa: E731
                                   "criterion", "seconds")
        return Outcome("replay-acceptance", "replay acceptance", cert, rows, fig)
    root = Path(args.dir)
    rows, ok = {}, True
    for path in sorted(root.glob("*.cert.json")):
        old = json.loads(path.read_text())
        for fname, ref in old.get("witness", {}).get("files", {}).items():
            if sha256_file(root / ref["path"]) != ref["sha256"]:
                rows[path.name] = f"witness {fname} changed"
                ok = False
                break
        else:
            command = old.get("parameters", {}).get("command")
            if not command:
                rows[path.name] = "no command recorded"
                continue
            with tempfile.TemporaryDirectory() as tmp:
                code = main(command + ["--out", tmp, "--format", "json", "--quiet"])
                fresh = [json.loads(p.read_text()) for p in Path(tmp).glob("*.cert.json")]
            same = any(f["payload_sha256"] == old["payload_sha256"] for f in fresh)
            rows[path.name] = "reproduced" if same else f"differs (exit {code})"
            ok &= same
    cert = make_certificate("replay", {"dir": root.name}, ok, data=rows, started=t0)
    return Outcome("replay", f"replay {root}", cert, rows)


# driver

def _global(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--budget-nodes", type=int, default=d if suppress else 2_000_000)
    parser.add_argument("--budget-seconds", type=float, default=d)
    parser.add_argument("--out", type=Path, default=d)
    parser.add_argument("--format", choices=("json", "text"), default=d if suppress else "text")
    parser.add_argument("--quiet", action="store_true", default=d if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polarzoo", description="Exact constructions and certificates for finite polar spaces.")
    _global(p, False)
    common = argparse.ArgumentParser(add_help=False)
    _global(common, True)
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("catalog", parents=[common], help="counts of totally isotropic subspaces")
    s.add_argument("family", choices=("W", "Q", "Q+", "Q-", "H", "H+"))
    s.add_argument("d", type=int, help="rank")
    s.add_argument("q", type=int, help="field order (q^2 for Hermitian spaces)")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("construct", parents=[common], help="build an object and its certificate")
    s.add_argument("name", choices=("segre-hemisystem", "elliptic-hemisystem", "one-system", "twisted-cubic",
                                    "w5-cyclic", "w5-even", "tangent-set", "hermitian-lift", "unital"))
    s.add_argument("--space")
    s.add_argument("--q", type=int)
    s.add_argument("--kind", default="buekenhout_metz", choices=("classical", "buekenhout_metz", "buekenhout_tits"))
    s.add_argument("--lift", action="store_true", help="also lift the elliptic hemisystem one step up")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="verify a claim on witness files")
    s.add_argument("claim", choices=("regular-system", "partial-ovoid", "one-system", "srg", "two-weight", "unital"))
    s.add_argument("file")
    s.add_argument("--space")
    s.add_argument("--form")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--q", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--maximal", action="store_true")
    s.add_argument("--params", type=int, nargs=4, metavar=("V", "K", "LAMBDA", "MU"))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("graph", parents=[common], help="build a graph and certify it")
    s.add_argument("family", choices=("nu", "collinearity", "dual-polar", "hemisystem-line", "unital", "linear-rep", "file"))
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--i", type=int)
    s.add_argument("--space")
    s.add_argument("--form")
    s.add_argument("--kind", default="buekenhout_metz")
    s.add_argument("--input")
    s.add_argument("--params", type=int, nargs=4, metavar=("V", "K", "LAMBDA", "MU"))
    s.add_argument("--edges", action="store_true", help="write an edge list instead of hex rows")
    s.add_argument("--aut", action="store_true")
    s.add_argument("--triples", action="store_true")
    s.add_argument("--cliques", action="store_true")
    s.add_argument("--coclique", type=int)
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("switch", parents=[common], help="switched tangent graph and its certificate")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--type", choices=("line", "pencil"), default="line")
    s.set_defaults(func=cmd_switch)

    s = sub.add_parser("scheme", parents=[common], help="association scheme on generators")
    s.add_argument("--space")
    s.add_argument("--form")
    s.add_argument("--system", help="generator file to test as a design")
    s.set_defaults(func=cmd_scheme)

    s = sub.add_parser("code", parents=[common], help="code of a projective point set")
    s.add_argument("file", nargs="?", help="point file, or 'hemisystem'")
    s.add_argument("--q", type=int)
    s.add_argument("--bridge", action="store_true", help="also build the coset graph")
    s.set_defaults(func=cmd_code)

    s = sub.add_parser("replay", parents=[common], help="rerun certificates in DIR, or the acceptance corpus")
    s.add_argument("dir", nargs="?")
    s.add_argument("--only", nargs="*", help="criterion numbers")
    s.set_defaults(func=cmd_replay)
    return p


def _replay_argv(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--out", "--format"):
            skip = True
            continue
        if a.startswith(("--out=", "--format=")) or a == "--quiet":
            continue
        out.append(a)
    return out


def _default_figure(outcome: Outcome):
    nums = {k: v for k, v in outcome.rows.items() if isinstance(v, (int, np.integer)) and not isinstance(v, bool)}
    if not nums:
        return None
    return lambda p: bar_figure(p, outcome.title, nums, "", "value", log=max(nums.values()) > 100 * max(1, min(nums.values())))


def emit(outcome: Outcome, args, argv: list[str]) -> None:
    cert = outcome.cert
    cert.parameters.setdefault("command", _replay_argv(argv))
    text = block(outcome.title, {"verdict": cert.verdict, **outcome.rows})
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        for name, content in outcome.files.items():
            path = args.out / f"{outcome.stem}.{name}"
            path.write_text(content)
            cert.attach_file(name, path, args.out)
        (args.out / f"{outcome.stem}.txt").write_text(text)
        figure = outcome.figure or _default_figure(outcome)
        if figure is not None:
            figure(args.out / f"{outcome.stem}.png")
        (args.out / f"{outcome.stem}.cert.json").write_text(cert.to_json() + "\n")
    if not args.quiet:
        print(cert.to_json() if args.format == "json" else text, end="\n" if args.format == "json" else "")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        outcome = args.func(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 2
    except (UsageError, FormError, FieldError, FileNotFoundError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except (cons.ConstructionError, sw.SwitchingError, codes.CodeError) as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 1
    emit(outcome, args, argv)
    return EXIT[outcome.cert.verdict]


if __name__ == "__main__":
    sys.exit(main())
