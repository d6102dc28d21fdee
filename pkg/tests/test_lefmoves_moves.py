"""Unit tests for :mod:`qtransverse.lefmoves`: free words, Lefschetz words and moves."""

from __future__ import annotations

import numpy as np
import pytest

from qtransverse.lefmoves import (
    FreeWord,
    LefschetzWord,
    apply_moves,
    cyclic_permute,
    cyclic_permute_inverse,
    destabilize,
    free_reduce,
    hurwitz_left,
    hurwitz_right,
    load_word,
    save_word,
    stabilize,
    total_monodromy,
)


def _two_cycles() -> LefschetzWord:
    return LefschetzWord.from_lists(2, [[1], [2]])


def test_free_reduce_cancels_nested_pairs() -> None:
    assert free_reduce([1, 2, -2, -1, 3]) == (3,)
    assert FreeWord(2, (1, -1, 2)).letters == (2,)


def test_free_word_rejects_foreign_letters() -> None:
    with pytest.raises(ValueError, match="not a generator of rank 2"):
        FreeWord(2, (1, 3))
    with pytest.raises(ValueError, match="not a generator"):
        FreeWord(2, (0,))


def test_group_operations() -> None:
    a, b = FreeWord(2, (1,)), FreeWord(2, (2,))
    assert (a * ~a).is_identity()
    assert a.conjugate(b).letters == (-2, 1, 2)
    assert str(a * ~b) == "x1 x2^-1"
    assert str(FreeWord.identity(2)) == "1"
    with pytest.raises(ValueError, match="Rank mismatch"):
        a * FreeWord(3, (1,))


def test_class_representative_is_cyclically_reduced_and_least() -> None:
    assert FreeWord(2, (-1, 2, 1)).class_representative() == (2,)
    assert FreeWord(2, (2, 1)).class_representative() == (1, 2)
    assert FreeWord(2, (-1, 2)).class_representative() == (-1, 2)


def test_hurwitz_left_keeps_the_ordered_product() -> None:
    word = _two_cycles()
    moved = hurwitz_left(word, 1)
    assert moved.as_lists() == [[2], [-2, 1, 2]]
    assert total_monodromy(moved).product == total_monodromy(word).product


def test_hurwitz_right_inverts_hurwitz_left() -> None:
    word = LefschetzWord.from_lists(3, [[1, 2], [-3], [2, 3]])
    for i in (1, 2):
        assert hurwitz_right(hurwitz_left(word, i), i) == word
        assert hurwitz_left(hurwitz_right(word, i), i) == word


def test_hurwitz_index_is_checked() -> None:
    with pytest.raises(ValueError, match=r"Hurwitz index must lie in \[1, 1\]"):
        hurwitz_left(_two_cycles(), 2)


def test_cyclic_permutation_keeps_the_conjugacy_class() -> None:
    word = _two_cycles()
    moved = cyclic_permute(word)
    assert moved.as_lists() == [[2], [1]]
    before, after = total_monodromy(word), total_monodromy(moved)
    assert before.product != after.product
    assert before.representative == after.representative == (1, 2)


def test_stabilize_and_destabilize() -> None:
    word = _two_cycles()
    bigger = stabilize(word, [3, 1])
    assert bigger.rank == 3
    assert bigger.as_lists() == [[3, 1], [1], [2]]
    assert destabilize(bigger) == word
    with pytest.raises(ValueError, match="must use the new generator 3"):
        stabilize(word, [1])
    with pytest.raises(ValueError, match="first cycle must use the top generator"):
        destabilize(word)


def test_move_script_trace_and_invariants() -> None:
    word = LefschetzWord.from_lists(2, [[1], [2], [1, 2]])
    script = [
        {"move": "hurwitz_left", "index": 1},
        {"move": "cyclic"},
        {"move": "hurwitz_right", "index": 2},
        {"move": "cyclic_inverse"},
    ]
    trace = apply_moves(word, script)
    assert len(trace) == len(script) + 1
    assert trace[0] == word
    assert total_monodromy(trace[-1]).representative == total_monodromy(word).representative


def test_move_script_errors() -> None:
    with pytest.raises(ValueError, match="Unknown move 'twist' at step 1"):
        apply_moves(_two_cycles(), [{"move": "twist"}])
    with pytest.raises(ValueError, match="needs an integer 'index'"):
        apply_moves(_two_cycles(), [{"move": "hurwitz_left"}])


def test_word_json_validation() -> None:
    with pytest.raises(ValueError, match="'rank' and 'cycles'"):
        LefschetzWord.from_dict({"rank": 2})
    with pytest.raises(ValueError, match="rank must be an integer"):
        LefschetzWord.from_dict({"rank": "2", "cycles": []})
    with pytest.raises(ValueError, match="list of integer lists"):
        LefschetzWord.from_dict({"rank": 2, "cycles": [1, 2]})


def test_word_files(tmp_path) -> None:
    path = save_word(LefschetzWord.from_lists(2, [[1, -2]]), tmp_path / "w.json")
    assert load_word(path).as_lists() == [[1, -2]]
    with pytest.raises(FileNotFoundError, match="Word file not found"):
        load_word(tmp_path / "missing.json")


def _random_word(rng: np.random.Generator) -> LefschetzWord:
    rank = int(rng.integers(1, 4))
    cycles = []
    for _ in range(int(rng.integers(2, 6))):
        length = int(rng.integers(1, 5))
        letters = rng.integers(1, rank + 1, size=length) * rng.choice([-1, 1], size=length)
        cycles.append(tuple(int(x) for x in letters))
    return LefschetzWord.from_lists(rank, cycles)


def test_random_hurwitz_sequences_keep_the_product() -> None:
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        word = _random_word(rng)
        before = total_monodromy(word).product
        for _ in range(int(rng.integers(1, 5))):
            i = int(rng.integers(1, len(word)))
            word = hurwitz_left(word, i) if rng.random() < 0.5 else hurwitz_right(word, i)
        assert total_monodromy(word).product == before


def test_every_move_is_undone_by_its_inverse() -> None:
    rng = np.random.default_rng(11)
    for _ in range(10_000):
        word = _random_word(rng)
        kind = int(rng.integers(0, 4))
        if kind == 0:
            i = int(rng.integers(1, len(word)))
            assert hurwitz_right(hurwitz_left(word, i), i) == word
            assert hurwitz_left(hurwitz_right(word, i), i) == word
        elif kind == 1:
            assert cyclic_permute_inverse(cyclic_permute(word)) == word
            assert cyclic_permute(cyclic_permute_inverse(word)) == word
        else:
            top = word.rank + 1
            side = [int(x) for x in rng.integers(1, top, size=int(rng.integers(0, 3)))]
            assert destabilize(stabilize(word, side + [top] + side[::-1])) == word
