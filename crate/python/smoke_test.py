"""Quick end-to-end check of the Python extension."""

from fractions import Fraction

import covermetric as cm


def main():
    weight, rows, cols = cm.cover_weight([[1, 1, 0], [1, 1, 0], [0, 0, 0]])
    assert weight == 2 and len(rows) + len(cols) == 2
    assert not cm.is_unique_minimal_cover([[1, 0], [0, 1]])
    assert cm.is_unique_minimal_cover([[1, 1, 1], [0, 0, 0], [0, 0, 0]])
    assert cm.cover_distance([[1, 0], [0, 1]], [[1, 0], [0, 0]]) == 1

    assert [cm.sphere_size(2, 2, 2, w) for w in range(3)] == [1, 8, 7]
    assert cm.ball_size(2, 2, 2, 1) == 9

    assert cm.optimal_split(4, 4, 4) == (2, 2)
    assert cm.success_probability(4, 4, 4, 2) == Fraction(3, 14)
    assert abs(cm.entropy_q_inverse(2, cm.entropy_q(2, 0.11)) - 0.11) < 1e-10
    assert abs(cm.c_cover(0.25, 0.375) - cm.c_cover_gv(0.25)) < 1e-12

    code = cm.MatrixCode.random(2, 6, 6, 4, seed=3)
    assert (code.m, code.n, code.k) == (6, 6, 4)
    c = code.encode([1, 0, 1, 1])
    assert code.contains(c)
    e = cm.sample_error(2, 6, 6, 1, seed=5)
    assert cm.cover_weight(e)[0] == 1
    received = [[(x + y) % 2 for x, y in zip(cr, er)] for cr, er in zip(c, e)]
    out = code.decode(received, 1, seed=1)
    assert out.found, out
    assert code.contains(out.codeword)
    assert cm.cover_distance(out.codeword, received) <= 1
    assert out.codeword in code.brute_force_decode(received, 1)

    general = cm.sample_error(2, 3, 3, 2, model="general", seed=1)
    assert cm.cover_weight(general)[0] == 2

    try:
        cm.cover_weight([[1, 2]], q=2)
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range entry accepted")

    print("smoke test passed:", code)


if __name__ == "__main__":
    main()
