"""Quick check of the installed `heckeval` extension module.

Build first:  pip install --no-build-isolation -e crates/py
"""

import json
import sys
from fractions import Fraction

import heckeval


def main() -> int:
    f = heckeval.QuadForm.parse("[3,1,2]")
    assert f.disc == -23 and not f.is_reduced()
    assert str(f.reduce()) == "[2,-1,3]"
    assert heckeval.class_number(-71) == 7
    assert heckeval.hurwitz(28) == 2 and heckeval.hurwitz(4) == Fraction(1, 2)

    p = heckeval.Pipeline(-163)
    assert (p.class_number, p.type_number) == (14, 8)
    assert p.mass == Fraction(27, 4)

    r = p.central_value(151)
    ns = sorted(abs(row["n"]) for row in r.rows)
    assert ns == [4, 4, 8, 8, 14, 14, 20], ns
    assert r.nonvanishing and r.oracle_difference < 1e-30
    assert json.loads(r.to_json())["d"] == 151

    cert = heckeval.nonvanishing_certificate(100)
    assert all(ok and parity % 2 == 1 for _, _, parity, ok in cert)

    try:
        heckeval.central_value(-7, 13)
    except ValueError:
        pass
    else:
        raise AssertionError("|D| = 13 should be rejected")

    print(f"ok: {r!r}; {len(cert)} certified |D| over Q(sqrt -7)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
