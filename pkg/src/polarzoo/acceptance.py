"""The acceptance corpus: one function per criterion, each returning (ok, details)."""
from __future__ import annotations

import time

import numpy as np

from . import codes, constructions as cons, graphs as gr, schemes as sch, switching as sw
from .gf import field_laws, field_of_order, prime_powers
from .polar import from_dimension, polar_space, verify_polar_axioms
from .projspace import ProjectiveSpace, enumerate_subspace_list, field_reduction, is_spread


def _fail_parts(parts: dict) -> list[str]:
    return [k for k, v in parts.items() if not v]


COUNTING_SPACES = (
    [("W", 3, q) for q in (2, 3, 4, 5)]
    + [("Q+", 3, q) for q in (2, 3, 4)]
    + [("Q-", 5, q) for q in (2, 3, 4)]
    + [("Q", 4, q) for q in (2, 3, 4)]
    + [("Q", 6, 3)]
    + [("W", 5, q) for q in (2, 3, 4)]
    + [("H", 2, q * q) for q in (2, 3)]
    + [("H", 3, q * q) for q in (2, 3)]
    + [("H", 4, 4)]
)


def counting_suite() -> tuple[bool, dict]:
    rows = {}
    ok = True
    for fam, n, q in COUNTING_SPACES:
        ps = from_dimension(fam, n, q)
        got = [len(ps.level(k)) for k in range(1, ps.d + 1)]
        want = [ps.formula_count(k) for k in range(1, ps.d + 1)]
        rows[ps.label] = {"enumerated": got, "formula": want}
        ok &= got == want
    return ok, rows


def segre_hemisystem() -> tuple[bool, dict]:
    ps = polar_space("H", 2, 9)
    res = cons.search_hemisystem(ps)
    if res["status"] != "found":
        return False, {"status": res["status"]}
    cert = cons.verify_regular_system(ps, res["system"], 1)
    G = gr.hemisystem_line_graph(ps, res["indices"])
    expected = gr.hemisystem_line_graph_params(3, 2)
    srg = gr.srg_certificate(G, expected)
    parts = {"size_56": len(res["system"]) == 56, "m_2": cert.ok and cert["m"] == 2,
             "srg_56_10_0_2": srg.ok and expected == (56, 10, 0, 2)}
    return all(parts.values()), {"parts": parts, "nodes": res["nodes"], "params": srg.data.get("params")}


def nu34() -> tuple[bool, dict]:
    G = gr.nu_graph(3, 2)
    srg = gr.srg_certificate(G, (12, 9, 6, 9))
    comps = G.complement().components()
    triangles = sorted(map(len, comps)) == [3, 3, 3, 3] and all(
        G.complement().induced(c).adj.sum() == 6 for c in comps)
    aut = gr.automorphism_count(G)
    parts = {"srg": srg.ok, "complement_4K3": triangles, "aut_31104": aut == 31104}
    return all(parts.values()), {"parts": parts, "aut": aut}


def nu54_switch() -> tuple[bool, dict]:
    G = gr.nu_graph(5, 2)
    H, cfg, _ = sw.build_switched_nu(4, 2, "line", base=G)
    target = (176, 135, 102, 108)
    cG = gr.triple_census(G)
    cert = sw.certify_cospectral_nonisomorphic(G, H, cfg)
    parts = {
        "NU54_srg": gr.srg_certificate(G, target).ok,
        "G2_srg": gr.srg_certificate(H, target).ok,
        "census_values_37_69_75_77": set(cG) == {37, 69, 75, 77},
        "censuses_differ": cert.ok,
    }
    return all(parts.values()), {"parts": parts, "census_NU54": dict(sorted(cG.items())),
                                 "census_G2": cert["census_H"]}


def partial_ovoids() -> tuple[bool, dict]:
    parts, sizes = {}, {}
    for name, po, size in (
        ("W52_cyclic", cons.w5_cyclic_partial_ovoid(2), 7),
        ("W53_cyclic", cons.w5_cyclic_partial_ovoid(3), 13),
        ("W54_even", cons.w5_even_partial_ovoid(4), 29),
    ):
        cert = cons.verify_partial_ovoid(po.space, po.points, check_maximal=True)
        sizes[name] = len(po)
        parts[name] = cert.ok and len(po) == size and cert["maximal"]
    tc = cons.twisted_cubic_partial_ovoid(25)
    cert = cons.verify_partial_ovoid(tc.space, tc.points, check_maximal=True)
    ext = cert.witness.get("extension_point")
    extended_ok = False
    if ext is not None:
        bigger = np.vstack([tc.points, np.array(ext)[None, :]])
        extended_ok = cons.verify_partial_ovoid(tc.space, bigger).ok
    sizes["W325_twisted_cubic"] = len(tc)
    parts["W325_size_66"] = len(tc) == 66
    parts["W325_partial_ovoid"] = cert["pairwise_ok"] and cert["lines_ok"]
    parts["W325_non_maximal"] = cert.data.get("maximal") is False and extended_ok
    return all(parts.values()), {"parts": parts, "sizes": sizes}


def hermitian_lift() -> tuple[bool, dict]:
    T = cons.tangent_set(2)
    tcert = cons.verify_tangent_set(T)
    L = cons.hermitian_lift(T)
    lcert = cons.verify_partial_ovoid(L.space, L.points, check_maximal=True)
    parts = {"tangent_set_9": tcert.ok and len(T.points) == 9,
             "lift_17_maximal": lcert.ok and len(L) == 17 == 2**4 + 1}
    return all(parts.values()), {"parts": parts}


def elliptic_chain() -> tuple[bool, dict]:
    eh = cons.elliptic_hemisystem(3)
    ps = eh["space"]
    c1 = cons.verify_regular_system(ps, eh["system"], 1)
    up = sch.chain_lift(ps, eh["system"], "up", 1)
    o = cons.q63_one_system()
    qs = o["space"]
    one = cons.verify_one_system(qs, o["S"], o["planes"])
    planes = cons.planes_through_lines(o["planes"], np.vstack([o["S"], o["S_opp"]]), len(qs.points))
    c8 = cons.verify_regular_system(qs, planes, 1)
    parts = {
        "sections_35": eh["sizes"]["total"] == 35 and len(set(eh["partition"].tolist())) == 35,
        "system_140_m5": c1.ok and len(eh["system"]) == 140 and c1["m"] == 5,
        "lift_m20": up["certificate"].ok and up["certificate"]["m"] == 20,
        "one_system": one.ok,
        "planes_224_m8": c8.ok and len(planes) == 224 and c8["m"] == 8,
    }
    return all(parts.values()), {"parts": parts, "lift_size": up["certificate"]["size"]}


def spectral_suite() -> tuple[bool, dict]:
    out, ok = {}, True
    for fam, d, q in (("W", 2, 2), ("W", 2, 3), ("Q", 2, 3), ("Q", 3, 3)):
        ps = polar_space(fam, d, q)
        meets = gr.meet_sizes(gr.generator_incidence(ps))
        for i in range(1, d + 1):
            r = sch.certify_distance_spectrum(ps, i, meets)
            mult_ok = all(m >= 0 and int(m) == m for m in r["multiplicities"])
            out[f"{ps.label} D^{i}"] = {"eigenvalues": r["eigenvalues"],
                                        "multiplicities": [int(m) for m in r["multiplicities"]], "ok": r["ok"]}
            ok &= r["ok"] and mult_ok
    hoff = {}
    for q, bound, exists in ((2, 5, True), (3, 10, False)):
        ps = polar_space("W", 2, q)
        G = gr.collinearity_graph(ps)
        p = gr.srg_check(G).params
        r, s = p.eigenvalues()
        spectrum = gr.spectrum_certify(G, [p.k, r, s])
        hb = gr.hoffman_bound(G, spectrum)
        found = gr.coclique_search(G, bound)
        good = hb == bound and ((found["status"] == "found") if exists else (found["status"] == "exhausted"))
        hoff[ps.label] = {"bound": str(hb), "search": found["status"], "max_found": found.get("max_size_found")}
        ok &= good
    out["hoffman"] = hoff
    return ok, out


def hemisystem_code() -> tuple[bool, dict]:
    ps = polar_space("H", 2, 9)
    res = cons.search_hemisystem(ps)
    S, _ = codes.klein_image(ps, res["system"])
    C = codes.code_from_set(S)
    tw = codes.two_weight_certify(C)
    bridge = codes.srg_code_bridge(S)
    parts = {
        "length_56_dim_6": (C.n, C.k, C.F.q) == (56, 6, 3),
        "weights_36_45": tw["weights"] == [36, 45],
        "min_distance_36": tw["min_distance"] == 36,
        "equivalence": bridge.ok,
        "G_Omega_729_112_19_20": bridge["params"] == [729, 112, 19, 20],
    }
    return all(parts.values()), {"parts": parts, "G_Omega_params": bridge["params"],
                                 "hyperplane_counts": bridge["hyperplane_counts"]}


def unitals() -> tuple[bool, dict]:
    U = cons.make_unital("buekenhout_metz", 3)
    uc = cons.verify_unital(U)
    G = gr.unital_graph(U)
    srg = gr.srg_certificate(G, (63, 32, 16, 16))
    cu = gr.unital_clique_census(G, 3)
    nu = gr.nu_graph(3, 3)
    cn = gr.unital_clique_census(nu, 3)
    extra = sorted(set(cu["classes"]) - set(cn["classes"]), key=repr)
    parts = {"design_2_28_4_1": uc.ok and uc["design"] == "2-(28,4,1)", "srg": srg.ok,
             "nu39_sizes_9_5": cn["sizes"] == [5, 9], "extra_class": bool(extra)}
    return all(parts.values()), {"parts": parts, "extra_classes": [repr(c) for c in extra],
                                 "bm_classes": {repr(k): v for k, v in cu["classes"].items()},
                                 "nu_classes": {repr(k): v for k, v in cn["classes"].items()}}


RANK2_SPACES = (
    [("W", 2, q) for q in (2, 3, 4, 5)] + [("Q", 2, q) for q in (2, 3, 4)]
    + [("Q-", 2, q) for q in (2, 3, 4)] + [("Q+", 2, q) for q in (2, 3, 4)]
    + [("H", 2, 4), ("H", 2, 9), ("H+", 2, 4)]
)


def property_suites() -> tuple[bool, dict]:
    parts = {}
    parts["field_laws_q_le_512"] = all(field_laws(field_of_order(q))["ok"] for q in prime_powers(512))
    inv = True
    for fam, d, q in (("W", 2, 3), ("Q", 2, 3), ("H", 2, 4), ("Q-", 2, 2), ("Q+", 2, 3)):
        ps = polar_space(fam, d, q)
        for pd in (0, 1):
            for S in enumerate_subspace_list(ps.F, ps.n, pd):
                inv &= ps.perp(ps.perp(S)) == S
    parts["polarity_involution"] = inv
    spread_ok = True
    for r, n, q in ((2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)):
        fr = field_reduction(r, n, q)
        big = ProjectiveSpace(r - 1, fr.big)
        elems = [fr.point_image(p) for p in big.points]
        res = is_spread(elems, ProjectiveSpace(r * n - 1, fr.small))
        spread_ok &= res["partition"] and all(e.vdim == n for e in elems)
        if r >= 3:
            # the image of a line is a union of spread elements
            idx = ProjectiveSpace(r * n - 1, fr.small).index
            owner = np.empty(len(idx), dtype=np.int64)
            for t, e in enumerate(elems):
                owner[idx.lookup(e.points())] = t
            for L in enumerate_subspace_list(fr.big, r - 1, 1):
                img = idx.lookup(fr.image(L).points())
                spread_ok &= len(set(owner[img].tolist())) == fr.big.q + 1
    parts["spread_properties"] = spread_ok
    parts["bsh_axioms_rank2"] = all(verify_polar_axioms(polar_space(f, d, q)).ok for f, d, q in RANK2_SPACES)
    graphs_ = [gr.nu_graph(3, 2), gr.collinearity_graph(polar_space("W", 2, 2)),
               gr.collinearity_graph(polar_space("Q", 2, 3)), gr.nu_graph(3, 3),
               gr.unital_graph(cons.make_unital("buekenhout_metz", 3))]
    parts["srg_complement_law"] = all(gr.srg_certificate(G).data.get("complement_law") for G in graphs_)
    ps = polar_space("H", 2, 9)
    S = sch.scheme_from_polar(ps)
    idem = sch.minimal_idempotents(S)
    hemi = cons.search_hemisystem(ps)["indices"]
    pencil = sch.generators_through(S, [0])
    oi = sch.orthogonal_intersection(hemi, pencil, S.n)
    design = sch.is_k_design(idem, sch.characteristic_vector(S.n, hemi), 1)
    anti = sch.is_k_antidesign(idem, sch.characteristic_vector(S.n, pencil), 1)
    parts["orthogonal_intersection_2"] = design and anti and oi["equal"] and oi["intersection"] == 2
    return all(parts.values()), {"parts": parts}


CRITERIA = [
    ("1 counting suite", counting_suite),
    ("2 Segre hemisystem", segre_hemisystem),
    ("3 NU(3,4)", nu34),
    ("4 NU(5,4) and switched graph", nu54_switch),
    ("5 partial ovoids", partial_ovoids),
    ("6 Hermitian lift", hermitian_lift),
    ("7 elliptic hemisystem and chain", elliptic_chain),
    ("8 spectral suite", spectral_suite),
    ("9 hemisystem code", hemisystem_code),
    ("10 unitals", unitals),
    ("11 property suites", property_suites),
]


def run_all(select=None, log=print) -> dict:
    results = {}
    for name, fn in CRITERIA:
        if select and name.split()[0] not in select:
            continue
        t0 = time.perf_counter()
        ok, detail = fn()
        wall = time.perf_counter() - t0
        results[name] = {"ok": ok, "detail": detail, "wall": round(wall, 2)}
        failed = _fail_parts(detail.get("parts", {}))
        log(f"{'PASS' if ok else 'FAIL'} criterion {name} ({wall:.1f}s)" + (f" failed: {failed}" if failed else ""))
    return results
