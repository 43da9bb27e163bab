"""Built-in scenarios: split and twisted curves, q in {1, 2}, several base algebras."""
from __future__ import annotations

from .scenario import Scenario, parse_scenario

_TRIVIAL = """
[base]
algebra = complex
[curve]
q = 1
name = trivial P^(1|1) over C
[bundle "O"]
expect_h1 = 0|0
expect_h0_ber = 0|0
[bundle "Z2"]
xi 0 = z^2
expect_h0 = 0|0
expect_h1 = 1|1
expect_h0_ber = 1|1
[run]
h0 O
h1 O
h0-ber O
duality-verify O
duality-verify Z2
residue-suite 10
"""

_SPLIT3_C = """
[base]
algebra = complex
[curve]
q = 1
name = split O(-3) over C
[glue "0"]
theta1 = z^3*theta1
[bundle "O"]
expect_h0 = 1|0
expect_h1 = 0|2
expect_h0_ber = 0|2
[bundle "Z2"]
xi 1 = (z-1)^2
[run]
h0 O
h1 O
h0-ber O
serre O
duality-verify O
duality-verify Z2
"""

_SPLIT3_B = """
[base]
algebra = grassmann(b)
[curve]
q = 1
name = split O(-3) over C[b]
[glue "0"]
theta1 = z^3*theta1
[bundle "O"]
expect_h1 = 2|2
expect_h0_ber = 2|2
[bundle "Z2"]
xi 1 = (z-1)^2
[divisor "D1"]
at 1 = 1 + b*theta1/(z-1)
expect_trivial = false
[divisor "D2"]
at 1 = 1 + b*theta1*z^3/(z-1)^4
expect_trivial = true
[divisor "D3"]
at 0 = 1 + b*z^2*theta1
expect_trivial = false
[divisor "D0"]
at 0 = 1 + b*theta1/z
[divisor "P"]
at 2 = z - 2
at 3 = 1/(z - 3)
expect_trivial = true
[divisor "Q"]
principal = (z - 2)/(z - 3)*(1 + b*theta1*z/(z - 1)^2)
expect_trivial = true
[divisor "D1+P"]
at 1 = 1 + b*theta1/(z-1)
at 2 = z - 2
at 3 = 1/(z - 3)
expect_trivial = false
[run]
h1 O
h0-ber O
duality-verify O
duality-verify Z2
degree D1
degree P
abel D1
abel-check D1
abel-check D2
abel-check D3
abel-check D0
abel-check P
abel-check Q
abel-check D1+P
residue-suite 10
"""

_SPLIT2_B = """
[base]
algebra = grassmann(b)
[curve]
q = 1
name = split O(-2) over C[b]
[glue "0"]
theta1 = z^2*theta1
[bundle "Fc"]
xi 0 = 1 + b*theta1/z
expect_effective = false
[bundle "O"]
expect_effective = true
[bundle "Fc1"]
xi 0 = (1 + b*theta1/z)/z
expect_effective = true
[divisor "E1"]
at 1 = 1 + b*theta1*z^2/(z-1)^2
expect_trivial = true
[divisor "E2"]
at 1 = 1 + b*theta1/(z-1)
expect_trivial = false
[run]
h0 Fc
h1 Fc
effective Fc
effective O
effective Fc1
duality-verify O
duality-verify Fc
abel-check E1
abel-check E2
"""

_SPLIT22_C = """
[base]
algebra = complex
[curve]
q = 2
name = split O(-2)+O(-2) over C
[glue "0"]
theta1 = z^2*theta1
theta2 = z^2*theta2
[bundle "O"]
expect_h1 = 3|2
expect_h0_ber = 3|2
[run]
h0 O
h1 O
h0-ber O
duality-verify O
residue-suite 10
"""

_TWISTED = """
[base]
algebra = grassmann(b1, b2)
[curve]
q = 1
name = twisted over C[b1,b2]
[glue "0"]
z = z + b1*theta1
theta1 = z^3*theta1 + b2*z
[divisor "T1"]
at 1 = 1 + b1*theta1/(z-1)
expect_trivial = false
[divisor "T2"]
at 1 = (z - 1)*(1 + b1*b2/(z - 1))
at 2 = 1/(z - 2)
[divisor "T3"]
at 1 = 1 + b1*b2/(z-1)
expect_trivial = true
[divisor "T4"]
principal = (z - 1)/(z - 2) + b1*theta1
expect_trivial = true
[run]
h0 O
h1 O
duality-verify O
abel-check T1
abel-check T2
abel-check T3
abel-check T4
residue-suite 10
"""

_EPS = """
[base]
algebra = truncated(eps, 2)
[curve]
q = 1
name = eps-deformed O(-3) over C[eps]/eps^2
[glue "0"]
z = z + eps/z
theta1 = z^3*theta1
[divisor "E1"]
at 1 = 1 + eps/(z-1)
[divisor "E2"]
at 1 = z - 1
at 2 = 1/(z - 2)
expect_trivial = true
[run]
h1 O
h0-ber O
duality-verify O
abel-check E1
abel-check E2
"""

CATALOG_TEXTS = {
    "trivial-C": _TRIVIAL,
    "split3-C": _SPLIT3_C,
    "split3-beta": _SPLIT3_B,
    "split2-beta": _SPLIT2_B,
    "split22-C": _SPLIT22_C,
    "twisted-beta12": _TWISTED,
    "eps": _EPS,
}


def catalog() -> list[Scenario]:
    return [parse_scenario(text, source=f"catalog:{name}") for name, text in CATALOG_TEXTS.items()]
