"""Command-line front end.

Inputs are an isomorphism signature, a path to a gluing table, or either of
those on standard input.  Exit codes: 0 success or Accept, 1 Reject or
NoneFound (or an invalid table for ``validate``), 2 usage error, 3 cap
exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import nsurf
from .angles import AngleError, format_angles, retriangulation_search, strict_angle_structure
from .certify import Certificate, CertifyError, NoneFound, canonical_json, cert_0F, generate, verify
from .enumerate import fundamental_surfaces, vertex_normal_surfaces
from .isosig import IsoSigError, decode, encode
from .moves import simplify
from .nsurf import CapExceeded
from .tri import GluingParseError, Triangulation, format_gluing_table, parse_gluing_table, validate

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_source(arg: Optional[str]) -> str:
    if arg is None or arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _looks_like_sig(text: str) -> bool:
    body = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    body = [ln for ln in body if ln]
    return len(body) == 1 and len(body[0].split()) == 1 and "(" not in body[0] and body[0] != "bdry"


def load_triangulation(arg: Optional[str]) -> Triangulation:
    text = _read_source(arg)
    if not text.strip():
        raise UsageError("no triangulation given")
    try:
        if _looks_like_sig(text):
            return decode(text.split("#", 1)[0].strip())
        return parse_gluing_table(text)
    except (IsoSigError, GluingParseError) as exc:
        raise UsageError(str(exc)) from None


class _Out:
    def __init__(self, path: Optional[str]):
        self.path = path
        self.parts: list[str] = []

    def write(self, text: str) -> None:
        self.parts.append(text if text.endswith("\n") else text + "\n")

    def flush(self) -> None:
        data = "".join(self.parts)
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap-weight", type=int, default=None, metavar="N",
                   help="largest surface (discs plus edge points) built explicitly")
    p.add_argument("--cap-hilbert", type=int, default=None, metavar="N",
                   help="largest number of Hilbert basis candidates")
    p.add_argument("--budget", type=int, default=None, metavar="N", help="retriangulation move budget")
    p.add_argument("--out", default=None, metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cuspcert", description="Normal surfaces and non-hyperbolicity certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, hlp in (("validate", "check a gluing table"), ("skeleton", "vertex, edge and face classes"),
                      ("homology", "first homology group"), ("simplify", "simplify with a recorded proof"),
                      ("zeroeff", "0-efficiency chain certificate")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("input", nargs="?")
        _common(p)

    p = sub.add_parser("isosig", help="encode or decode signatures")
    p.add_argument("action", choices=("encode", "decode"))
    p.add_argument("input", nargs="?")
    _common(p)

    p = sub.add_parser("enumerate", help="vertex or fundamental normal surfaces")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--vertex", action="store_true")
    g.add_argument("--fundamental", action="store_true")
    p.add_argument("input", nargs="?")
    _common(p)

    p = sub.add_parser("certify", help="certify non-hyperbolicity or hyperbolicity")
    p.add_argument("mode", choices=("nonhyp", "hyp"))
    p.add_argument("input", nargs="?")
    _common(p)

    p = sub.add_parser("verify", help="verify a certificate file")
    p.add_argument("certificate")
    p.add_argument("--triangulation", default=None, help="also require the certificate to name this triangulation")
    _common(p)
    return ap


def _check_caps(args) -> None:
    for flag in ("cap_weight", "cap_hilbert", "budget"):
        v = getattr(args, flag, None)
        if v is not None and v <= 0:
            raise UsageError(f"--{flag.replace('_', '-')} must be positive")


def _cmd_validate(args, out: _Out) -> int:
    text = _read_source(args.input)
    try:
        tri = decode(text.strip()) if _looks_like_sig(text) else parse_gluing_table(text)
    except (IsoSigError, GluingParseError) as exc:
        out.write(json.dumps({"valid": False, "diagnostics": [str(exc)]}) if args.format == "json" else f"invalid: {exc}")
        return EXIT_NO
    problems = validate(tri)
    if not tri.is_valid:
        problems.append("triangulation has an invalid edge or vertex link")
    if args.format == "json":
        out.write(canonical_json({"valid": not problems, "diagnostics": problems}))
    else:
        out.write("valid" if not problems else "\n".join("invalid: " + p for p in problems))
    return EXIT_OK if not problems else EXIT_NO


def _cmd_skeleton(args, out: _Out) -> int:
    tri = load_triangulation(args.input)
    sk = tri.skeleton
    info = {
        "tetrahedra": tri.size,
        "vertices": len(sk.vertices),
        "edges": len(sk.edges),
        "faces": len(sk.faces),
        "euler_characteristic": sk.euler_characteristic,
        "truncated_euler_characteristic": sk.truncated_euler_characteristic,
        "orientable": tri.is_orientable,
        "vertex_links": [v.link for v in sk.vertices],
        "edge_degrees": [e.degree for e in sk.edges],
        "boundary": [{"euler": bc.euler, "orientable": bc.orientable, "faces": len(bc.faces)}
                     for bc in sk.boundary_components],
    }
    if args.format == "json":
        out.write(canonical_json(info))
    else:
        out.write(f"T={info['tetrahedra']} V={info['vertices']} E={info['edges']} F={info['faces']} "
                  f"chi={info['euler_characteristic']} truncated_chi={info['truncated_euler_characteristic']}")
        out.write("orientable" if info["orientable"] else "nonorientable")
        out.write("vertex links: " + " ".join(info["vertex_links"]))
        out.write("edge degrees: " + " ".join(map(str, info["edge_degrees"])))
        for k, b in enumerate(info["boundary"]):
            out.write(f"boundary {k}: chi={b['euler']} {'orientable' if b['orientable'] else 'nonorientable'} "
                      f"faces={b['faces']}")
    return EXIT_OK


def _cmd_homology(args, out: _Out) -> int:
    h = load_triangulation(args.input).homology_h1()
    if args.format == "json":
        out.write(canonical_json({"rank": h.rank, "torsion": list(h.torsion)}))
    else:
        out.write(str(h))
    return EXIT_OK


def _cmd_isosig(args, out: _Out) -> int:
    if args.action == "encode":
        tri = load_triangulation(args.input)
        if tri.size and not tri.is_connected:
            raise UsageError("signatures need a connected triangulation")
        out.write(encode(tri))
    else:
        sig = _read_source(args.input).strip()
        try:
            tri = decode(sig)
        except IsoSigError as exc:
            raise UsageError(str(exc)) from None
        out.write(format_gluing_table(tri).rstrip("\n") or "# empty triangulation")
    return EXIT_OK


def _cmd_simplify(args, out: _Out) -> int:
    tri = load_triangulation(args.input)
    t2, proof = simplify(tri)
    if args.format == "json":
        out.write(canonical_json({"isosig": encode(t2), "proof": [list(s) for s in proof.steps]}))
    else:
        out.write(encode(t2))
        if proof.steps:
            out.write(proof.to_text())
    return EXIT_OK


def _cmd_enumerate(args, out: _Out) -> int:
    tri = load_triangulation(args.input)
    if args.vertex:
        surfaces = vertex_normal_surfaces(tri)
    else:
        surfaces = fundamental_surfaces(tri, cap=args.cap_hilbert)
    rows = []
    for v in surfaces:
        names = [str(c) for c in nsurf.classify(tri, v)]
        if nsurf.is_vertex_linking(v):
            names.append("vertex-linking")
        rows.append((v, names))
    if args.format == "json":
        out.write(canonical_json([{"vector": list(v), "type": names} for v, names in rows]))
    else:
        for v, names in rows:
            out.write(nsurf.format_vector(v) + "  " + ",".join(names))
    return EXIT_OK


def _cmd_certify(args, out: _Out) -> int:
    tri = load_triangulation(args.input)
    if args.mode == "nonhyp":
        try:
            res = generate(tri, cap_hilbert=args.cap_hilbert)
        except CertifyError as exc:
            raise UsageError(str(exc)) from None
        if isinstance(res, NoneFound):
            out.write(res.to_json())
            return EXIT_NO
        out.write(res.to_json())
        return EXIT_OK
    try:
        t = decode(encode(tri))
        res = strict_angle_structure(t)
    except AngleError as exc:
        raise UsageError(str(exc)) from None
    if res.found:
        out.write(Certificate("StrictAngleStructure", encode(t), angles=format_angles(res.assignment)).to_json())
        return EXIT_OK
    if args.budget:
        found = retriangulation_search(t, args.budget)
        if found.found:
            sys.stderr.write("found after %d moves:\n%s" % (len(found.proof.steps), found.proof.to_text()))
            cert = Certificate("StrictAngleStructure", encode(found.triangulation),
                               angles=format_angles(found.assignment))
            out.write(cert.to_json())
            return EXIT_OK
    dual = [str(y) for y in res.dual] if res.dual is not None else None
    out.write(canonical_json({"kind": "NoneFound", "triangulation": encode(t), "status": res.status,
                              "reason": "no strict angle structure on this triangulation", "dual": dual}))
    return EXIT_NO


def _cmd_verify(args, out: _Out) -> int:
    text = _read_source(args.certificate)
    tri = load_triangulation(args.triangulation) if args.triangulation else None
    try:
        cert = Certificate.from_json(text)
        verdict = verify(cert, tri)
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        from .certify import REJECT, Verdict

        verdict = Verdict(REJECT, [], [f"unreadable certificate: {exc}"])
    if args.format == "json":
        out.write(verdict.to_json())
    else:
        out.write(verdict.overall)
        for name, status in verdict.statuses:
            out.write(f"  {name}: {status}")
        for d in verdict.diagnostics:
            out.write(f"  ! {d}")
    return EXIT_OK if verdict.accepted else EXIT_NO


def _cmd_zeroeff(args, out: _Out) -> int:
    tri = load_triangulation(args.input)
    try:
        cert = cert_0F(tri)
    except CertifyError as exc:
        raise UsageError(str(exc)) from None
    out.write(cert.to_json())
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "skeleton": _cmd_skeleton,
    "homology": _cmd_homology,
    "isosig": _cmd_isosig,
    "simplify": _cmd_simplify,
    "enumerate": _cmd_enumerate,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "zeroeff": _cmd_zeroeff,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    out = _Out(args.out)
    try:
        _check_caps(args)
        if args.cap_weight is not None:
            nsurf.set_weight_cap(args.cap_weight)
        code = _COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"cuspcert: {exc}\n")
        return EXIT_USAGE
    except CapExceeded as exc:
        sys.stderr.write(f"cuspcert: cap exceeded: {exc}\n")
        return EXIT_CAP
    finally:
        if args.cap_weight is not None:
            nsurf.set_weight_cap(nsurf.DEFAULT_WEIGHT_CAP)
    out.flush()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
