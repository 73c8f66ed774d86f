import random

import pytest

from quarticred.residue import (
    ExtField, PrimeField, factor_degree_profile, find_irreducible,
    is_irreducible, is_prime, p_deriv, p_divmod, p_eval, p_gcd, p_mul,
    poly_roots, sqrt_in_field,
)


F7 = PrimeField(7)
F13 = PrimeField(13)
# F_169 = F_13(tau), tau^2 + 12 tau + 2 = 0
F169 = ExtField(F13, [2, 12, 1])


def test_prime_field_axioms():
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rng.randrange(13) for _ in range(3))
        assert F13.add(F13.add(a, b), c) == F13.add(a, F13.add(b, c))
        assert F13.mul(a, F13.add(b, c)) == F13.add(F13.mul(a, b), F13.mul(a, c))
    for a in range(1, 13):
        assert F13.mul(a, F13.inv(a)) == 1


def test_ext_field_axioms_and_inverse():
    rng = random.Random(2)
    for _ in range(200):
        a, b, c = (F169.random(rng) for _ in range(3))
        assert F169.mul(a, F169.mul(b, c)) == F169.mul(F169.mul(a, b), c)
        assert F169.mul(a, F169.add(b, c)) == F169.add(F169.mul(a, b), F169.mul(a, c))
        if not F169.is_zero(a):
            assert F169.mul(a, F169.inv(a)) == F169.one()


def test_ext_field_generator_satisfies_modulus():
    t = F169.gen()
    # t^2 + 12 t + 2 = 0
    lhs = F169.add(F169.mul(t, t), F169.add(F169.mul(F169.from_int(12), t),
                                            F169.from_int(2)))
    assert F169.is_zero(lhs)


def test_roots_x2_minus_2_over_f7():
    rts = poly_roots(F7, [-2 % 7, 0, 1])
    assert [(r, m) for r, m in rts] == [(3, 1), (4, 1)]


def test_roots_x2_plus_1_over_f7_empty():
    assert poly_roots(F7, [1, 0, 1]) == []


def test_roots_x2_over_f5():
    F5 = PrimeField(5)
    assert poly_roots(F5, [0, 0, 1]) == [(0, 2)]


def test_roots_with_multiplicity_and_ext_field():
    # (x - t)^2 (x - 3) over F_169
    t = F169.gen()
    three = F169.from_int(3)
    lin1 = [F169.neg(t), F169.one()]
    f = p_mul(F169, p_mul(F169, lin1, lin1), [F169.neg(three), F169.one()])
    rts = poly_roots(F169, f)
    assert (t, 2) in rts and (three, 1) in rts and len(rts) == 2


def test_roots_over_nested_extension():
    # x^8 + 1 has no roots over F_7, all 8 over F_49
    assert poly_roots(F7, [1] + [0] * 7 + [1]) == []
    F49 = ExtField(F7, find_irreducible(F7, 2))
    one = F49.one()
    f = [one] + [F49.zero()] * 7 + [one]
    rts = poly_roots(F49, f)
    assert len(rts) == 8 and all(m == 1 for _, m in rts)


def test_degree_profile():
    # x^2 + 1 irreducible over F_7 -> [2]; x^2 - 2 splits -> [1, 1]
    assert factor_degree_profile(F7, [1, 0, 1]) == [2]
    assert factor_degree_profile(F7, [5, 0, 1]) == [1, 1]


def test_is_irreducible():
    assert is_irreducible(F13, [2, 12, 1])           # tau poly at 13
    assert is_irreducible(F7, [1, 3, 1])             # zeta_8 poly at 7
    assert not is_irreducible(F7, [5, 0, 1])         # x^2 - 2 = (x-3)(x-4)
    F5 = PrimeField(5)
    assert is_irreducible(F5, [2, 0, 0, 0, 1])       # x^4 + 2 over F_5


def test_find_irreducible_various_degrees():
    for F, k in [(F7, 2), (F7, 3), (F13, 2), (F169, 2), (F169, 3)]:
        f = find_irreducible(F, k)
        assert len(f) == k + 1 and is_irreducible(F, f)


def test_sqrt_in_field():
    assert sqrt_in_field(F7, 2) == 3          # canonical: 3 < 4
    assert sqrt_in_field(F7, 4) == 2
    assert sqrt_in_field(F7, 3) is None       # 3 is not a QR mod 7
    rng = random.Random(3)
    for _ in range(50):
        a = F169.random(rng)
        s = sqrt_in_field(F169, a)
        if s is not None:
            assert F169.mul(s, s) == a


def test_divmod_and_gcd():
    rng = random.Random(4)
    for _ in range(50):
        f = [rng.randrange(13) for _ in range(6)] + [1]
        g = [rng.randrange(13) for _ in range(3)] + [1]
        q, r = p_divmod(F13, f, g)
        back = p_mul(F13, q, g)
        total = [F13.add(a, b) for a, b in
                 zip(back + [0] * len(f), r + [0] * (len(back) + len(f)))][:len(f)]
        assert total == list(f)
        assert len(r) < len(g)
    g = p_gcd(F13, p_mul(F13, [1, 1], [3, 1]), p_mul(F13, [1, 1], [5, 1]))
    assert g == [1, 1]


def test_deriv():
    # d/dx (x^7 + x^2 + 3) over F_7 = 2x
    assert p_deriv(F7, [3, 0, 1, 0, 0, 0, 0, 1]) == [0, 2]


def test_eval():
    assert p_eval(F7, [1, 2, 1], 3) == (1 + 6 + 9) % 7


def test_is_prime():
    assert all(is_prime(p) for p in (3, 5, 7, 13, 10007))
    assert not any(is_prime(n) for n in (1, 4, 9, 91, 1001))
