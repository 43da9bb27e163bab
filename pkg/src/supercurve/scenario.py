"""Scenario files: a small sectioned text format describing curves, bundles and divisors.

Example::

    [base]
    algebra = grassmann(b)

    [curve]
    q = 1
    name = split O(-3)

    [glue "0"]
    z = z
    theta1 = z^3*theta1

    [bundle "L"]
    xi 1 = 1 + b*theta1/(z-1)
    expect_h1 = 2|2

    [divisor "D"]
    at 1 = 1 + b*theta1/(z-1)
    expect_trivial = false

    [run]
    h1 L
    abel-check D

Expressions use ``+ - * / ^`` (or ``**``), integers, ``I`` for the
imaginary unit, ``z``, ``theta1..thetaq`` and the declared generators.
Multiplication must be written out.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .berezin import LocalAutomorphism
from .curve import LineBundle, SuperCurve, TruncationBounds
from .divisor import CartierDivisor
from .scalars import GaussianRational
from .superalgebra import BaseAlgebra, LambdaAlgebra
from .superfunction import INF, PointP1, SuperRationalFunction

SRF = SuperRationalFunction

COMMANDS = ("h0", "h1", "h0-ber", "serre", "duality-verify", "degree", "abel", "abel-check",
            "effective", "residue-suite")


class ScenarioError(ValueError):
    """Parse or validation failure, tagged with a line number when known."""

    def __init__(self, message: str, line: int | None = None, source: str = "<scenario>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


# Expressions -----------------------------------------------------------------------

_ALGEBRA_RE = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def parse_algebra(text: str) -> BaseAlgebra:
    """``complex``, ``grassmann(b1, b2)``, ``truncated(eps, 2)``, joined by ``*`` for tensors."""
    parts = [p for p in _split_top(text, "*")]
    algs = []
    for part in parts:
        m = _ALGEBRA_RE.match(part)
        if not m:
            raise ValueError(f"cannot read algebra {part.strip()!r}")
        kind, args = m.group(1), m.group(2)
        args = [a.strip() for a in args.split(",")] if args else []
        if kind == "complex":
            algs.append(BaseAlgebra.complex())
        elif kind == "grassmann":
            if not args:
                raise ValueError("grassmann needs generator names")
            algs.append(BaseAlgebra.grassmann(args))
        elif kind == "truncated":
            if len(args) != 2:
                raise ValueError("truncated needs a name and an order")
            algs.append(BaseAlgebra.truncated(args[0], int(args[1])))
        else:
            raise ValueError(f"unknown algebra {kind!r}")
    out = algs[0]
    for a in algs[1:]:
        out = BaseAlgebra.tensor(out, a)
    return out


def _split_top(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


_THETA_RE = re.compile(r"^theta(\d+)$")


def parse_expression(text: str, alg: LambdaAlgebra) -> SRF:
    """Evaluate a rational expression over ``alg``; raises ``ValueError`` naming bad tokens."""
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"syntax error in {text.strip()!r}") from exc
    return _eval(tree.body, alg)


def _eval(node, alg):
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, alg)
        if isinstance(node.op, ast.Pow):
            e = _int_value(node.right)
            return left ** e
        right = _eval(node.right, alg)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        raise ValueError(f"operator {type(node.op).__name__} not allowed")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, alg)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ValueError(f"literal {node.value!r} is not an integer")
        return SRF.constant(alg, node.value)
    if isinstance(node, ast.Name):
        name = node.id
        if name == "z":
            return SRF.z(alg)
        if name == "I":
            return SRF.constant(alg, GaussianRational(0, 1))
        m = _THETA_RE.match(name)
        if m:
            i = int(m.group(1))
            if not 1 <= i <= alg.q:
                raise ValueError(f"unknown odd coordinate {name!r} (q = {alg.q})")
            return SRF.theta(alg, i)
        if name in alg.base.generators:
            return SRF.generator(alg, name)
        raise ValueError(f"unknown symbol {name!r}")
    if isinstance(node, ast.Call):
        raise ValueError("function calls are not allowed")
    raise ValueError(f"unsupported syntax {ast.dump(node)[:40]}")


def _int_value(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_value(node.operand)
    raise ValueError("exponents must be integer literals")


def parse_point(text: str) -> PointP1:
    t = text.strip()
    if t in ("inf", "infinity"):
        return INF
    alg = LambdaAlgebra(BaseAlgebra.complex(), 0)
    v = parse_expression(t, alg)
    if not v.is_constant():
        raise ValueError(f"point {t!r} is not a constant")
    return PointP1(v.constant_value().c.get(0, GaussianRational(0)))


# Scenario model ---------------------------------------------------------------------

@dataclass
class Command:
    name: str
    args: list
    line: int


@dataclass
class Scenario:
    name: str
    curve: SuperCurve
    bundles: dict = field(default_factory=dict)
    divisors: dict = field(default_factory=dict)
    commands: list = field(default_factory=list)
    expectations: dict = field(default_factory=dict)
    bounds_N: int | None = None
    bounds_points: tuple = ()
    source: str = "<scenario>"

    def bounds_for(self, L: LineBundle, scale: int = 1) -> TruncationBounds | None:
        if self.bounds_N is None and not self.bounds_points:
            if scale == 1:
                return None
            return TruncationBounds.for_bundle(L, scale)
        auto = TruncationBounds.for_bundle(L, 1, self.bounds_points)
        N = self.bounds_N if self.bounds_N is not None else auto.N
        return TruncationBounds(auto.points, N * max(1, scale))


_SECTION_RE = re.compile(r'^\[\s*([\w-]+)(?:\s+"([^"]*)")?\s*\]$')


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    sections: list[tuple[str, str | None, int, list]] = []
    cur = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            cur = (m.group(1), m.group(2), lineno, [])
            sections.append(cur)
            continue
        if line.startswith("["):
            raise ScenarioError(f"malformed section header {line!r}", lineno, source)
        if cur is None:
            raise ScenarioError("content before the first section", lineno, source)
        cur[3].append((lineno, line))

    def only(kind):
        found = [s for s in sections if s[0] == kind]
        if len(found) > 1:
            raise ScenarioError(f"duplicate [{kind}] section", found[1][2], source)
        return found[0] if found else None

    known = {"base", "curve", "glue", "bundle", "divisor", "run", "bounds"}
    for kind, _n, ln, _b in sections:
        if kind not in known:
            raise ScenarioError(f"unknown section [{kind}]", ln, source)

    base_sec = only("base")
    if base_sec is None:
        raise ScenarioError("missing [base] section", None, source)
    kv = _pairs(base_sec, source)
    if "algebra" not in kv:
        raise ScenarioError("[base] needs 'algebra'", base_sec[2], source)
    try:
        base = parse_algebra(kv["algebra"][0])
    except ValueError as exc:
        raise ScenarioError(str(exc), kv["algebra"][1], source) from None

    curve_sec = only("curve")
    q, name = 1, source
    if curve_sec is not None:
        ckv = _pairs(curve_sec, source)
        if "q" in ckv:
            try:
                q = int(ckv["q"][0])
            except ValueError:
                raise ScenarioError(f"q must be an integer, got {ckv['q'][0]!r}", ckv["q"][1], source) from None
        if "name" in ckv:
            name = ckv["name"][0]
    alg = LambdaAlgebra(base, q)

    def expr(value, line):
        try:
            return parse_expression(value, alg)
        except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
            raise ScenarioError(str(exc), line, source) from None

    def point(value, line):
        try:
            return parse_point(value)
        except ValueError as exc:
            raise ScenarioError(str(exc), line, source) from None

    gluing = {}
    for kind, arg, ln, body in sections:
        if kind != "glue":
            continue
        if arg is None:
            raise ScenarioError('[glue] needs a point, e.g. [glue "0"]', ln, source)
        P = point(arg, ln)
        gkv = _pairs((kind, arg, ln, body), source)
        image_z = expr(gkv["z"][0], gkv["z"][1]) if "z" in gkv else SRF.z(alg)
        thetas = []
        for i in range(1, q + 1):
            key = f"theta{i}"
            thetas.append(expr(gkv[key][0], gkv[key][1]) if key in gkv else SRF.theta(alg, i))
        for key, (_v, kl) in gkv.items():
            if key != "z" and not (key.startswith("theta") and key[5:].isdigit() and 1 <= int(key[5:]) <= q):
                raise ScenarioError(f"unknown gluing key {key!r}", kl, source)
        try:
            gluing[P] = LocalAutomorphism(alg, image_z, thetas)
        except ValueError as exc:
            raise ScenarioError(str(exc), ln, source) from None
    try:
        curve = SuperCurve(base, q, gluing, name)
    except ValueError as exc:
        raise ScenarioError(str(exc), None, source) from None

    sc = Scenario(name, curve, source=source)
    sc.bundles["O"] = curve.trivial_bundle()
    for kind, arg, ln, body in sections:
        if kind == "bundle":
            if not arg:
                raise ScenarioError("[bundle] needs a name", ln, source)
            mult, exp = {}, {}
            for bl, line in body:
                key, value = _split_kv(line, bl, source)
                if key.startswith("xi "):
                    mult[point(key[3:], bl)] = expr(value, bl)
                elif key in ("expect_effective",):
                    exp[key] = _bool(value, bl, source)
                elif key in ("expect_h0", "expect_h1", "expect_h0_ber"):
                    exp[key] = _dims(value, bl, source)
                else:
                    raise ScenarioError(f"unknown bundle key {key!r}", bl, source)
            try:
                sc.bundles[arg] = LineBundle(curve, mult, name=arg)
            except ValueError as exc:
                raise ScenarioError(str(exc), ln, source) from None
            sc.expectations[arg] = exp
        elif kind == "divisor":
            if not arg:
                raise ScenarioError("[divisor] needs a name", ln, source)
            data, exp = {}, {}
            for bl, line in body:
                key, value = _split_kv(line, bl, source)
                if key.startswith("at "):
                    data[point(key[3:], bl)] = expr(value, bl)
                elif key == "principal":
                    exp["principal"] = expr(value, bl)
                elif key == "expect_trivial":
                    exp[key] = _bool(value, bl, source)
                else:
                    raise ScenarioError(f"unknown divisor key {key!r}", bl, source)
            try:
                if "principal" in exp:
                    D = CartierDivisor.principal(curve, exp.pop("principal"), arg)
                    for P, f in data.items():
                        D = D + CartierDivisor(curve, {P: f})
                    D.name = arg
                else:
                    D = CartierDivisor(curve, data, arg)
            except ValueError as exc:
                raise ScenarioError(str(exc), ln, source) from None
            sc.divisors[arg] = D
            sc.expectations[arg] = exp
    bsec = only("bounds")
    if bsec is not None:
        bkv = _pairs(bsec, source)
        if "N" in bkv:
            sc.bounds_N = int(bkv["N"][0])
        if "points" in bkv:
            sc.bounds_points = tuple(point(p, bkv["points"][1]) for p in bkv["points"][0].split(","))
    run = only("run")
    if run is not None:
        for rl, line in run[3]:
            toks = line.split()
            cmd = toks[0]
            if cmd not in COMMANDS:
                raise ScenarioError(f"unknown command {cmd!r}", rl, source)
            args = toks[1:]
            if cmd in ("h0", "h1", "h0-ber", "serre", "duality-verify", "effective"):
                target = args[0] if args else "O"
                if target not in sc.bundles:
                    raise ScenarioError(f"unknown bundle {target!r}", rl, source)
                args = [target]
            elif cmd in ("degree", "abel", "abel-check"):
                if not args or args[0] not in sc.divisors:
                    raise ScenarioError(f"{cmd} needs a declared divisor", rl, source)
                args = args[:1]
            elif cmd == "residue-suite":
                try:
                    args = [int(args[0]) if args else 20]
                except ValueError:
                    raise ScenarioError(f"residue-suite count must be an integer, got {args[0]!r}", rl, source) from None
            sc.commands.append(Command(cmd, args, rl))
    return sc


def _split_kv(line: str, lineno: int, source: str):
    if "=" not in line:
        raise ScenarioError(f"expected 'key = value', got {line!r}", lineno, source)
    key, value = line.split("=", 1)
    return " ".join(key.split()), value.strip()


def _pairs(section, source) -> dict:
    out = {}
    for ln, line in section[3]:
        key, value = _split_kv(line, ln, source)
        if key in out:
            raise ScenarioError(f"duplicate key {key!r}", ln, source)
        out[key] = (value, ln)
    return out


def _bool(value: str, line: int, source: str) -> bool:
    v = value.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise ScenarioError(f"expected true/false, got {value!r}", line, source)


def _dims(value: str, line: int, source: str) -> tuple[int, int]:
    m = re.match(r"^\s*(\d+)\s*\|\s*(\d+)\s*$", value)
    if not m:
        raise ScenarioError(f"expected dimensions like 2|1, got {value!r}", line, source)
    return int(m.group(1)), int(m.group(2))
