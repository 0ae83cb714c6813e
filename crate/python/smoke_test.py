"""Smoke test for the compiled extension.

    pip install --no-build-isolation ./crates/python
    python python/smoke_test.py
"""

from fractions import Fraction

import galois_duel as gd


def main():
    rows = gd.probability_table(11, p="1/3")
    assert len(rows) == 11
    assert rows[0] == (0, Fraction(1, 3), Fraction(0), "A")
    assert rows[10] == (10, Fraction(87649, 177147), Fraction(29150, 59049), "A")

    duel = gd.Duel(q=Fraction(9, 10))
    duel.extend_to(21)
    assert len(duel) == 21
    assert duel.sequence() == "ABBABAABBAABABBABAABB"
    assert duel.agreement_length() == 20
    assert duel.f_polynomial(2) == [-1, 1, 1]
    assert duel.p() + duel.q() == 1

    assert gd.compare("9/10", 21) == (20, 20)
    assert gd.compare("451/500", 21) == (21, None)
    assert gd.tm_prefix(8, "01") == "01101001"
    assert gd.balanced_prefix_sum(9999) == 0

    exp = gd.duel_expansion(2, 11)
    assert exp["rendered"] == "0.10010100101"
    assert exp["base"] == Fraction(3, 2)
    assert gd.validate_expansion(1, "3/2", exp["digits"]) is None
    complement = [1 - d for d in exp["digits"]]
    assert gd.validate_expansion(1, "3/2", complement) is None

    gap_a, gap_b, bound = gd.half_limit_check("1/3", 20)
    assert gap_a <= bound and gap_b <= bound

    (alpha,) = gd.alpha_sequence(2)
    assert alpha["lo"] < (5 ** 0.5 - 1) / 2 < alpha["hi"]
    assert alpha["hi"] - alpha["lo"] <= Fraction(1, 2 ** 40)

    sim = gd.run_sim("1/3", 64, 20000, seed=7)
    assert sim == gd.run_sim("1/3", 64, 20000, seed=7)
    assert all(abs(z) <= 4 for z in sim["z_scores"])

    for bad in (lambda: gd.Duel(p=1), lambda: gd.Duel(p=0.5), lambda: gd.Duel()):
        try:
            bad()
        except (ValueError, TypeError):
            pass
        else:
            raise AssertionError("expected an error")

    print("smoke test passed")


if __name__ == "__main__":
    main()
