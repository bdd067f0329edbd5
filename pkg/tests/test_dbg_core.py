import numpy as np
import pytest

from mdskit.dbg_core import (
    GraphParams,
    KmerSet,
    decode,
    encode,
    enumerate_pcrs,
    format_kmer_set,
    homopolymer_symbol,
    left_companions,
    necklace_count,
    parse_kmer_set,
    pcr_index,
    pcr_of,
    pcr_set_count,
    predecessors,
    read_kmer_set,
    right_companions,
    rotate,
    successors,
    write_kmer_set,
)
from mdskit.errors import KmerError, ParamsError

from .oracles import all_words, necklaces


def test_encode_binary_and_zero(p4):
    assert encode("1011", p4) == 11
    assert encode("0000", p4) == 0


def test_encode_nucleotides():
    assert encode("ACGT", GraphParams(4, 4)) == 27


@pytest.mark.parametrize("sigma,k", [(2, 4), (3, 3), (4, 3)])
def test_decode_inverts_encode(sigma, k):
    p = GraphParams(sigma, k)
    for w in all_words(sigma, k):
        assert decode(encode(w, p), p) == w


@pytest.mark.parametrize("sigma,k", [(1, 3), (2, 1), (2, 0), (2, 64)])
def test_params_rejected(sigma, k):
    with pytest.raises(ParamsError):
        GraphParams(sigma, k)


def test_encode_rejects_bad_input(p4):
    with pytest.raises(KmerError):
        encode("102", p4)
    with pytest.raises(KmerError):
        encode("1021", p4)


def test_successors_examples(p4):
    assert sorted(decode(v, p4) for v in successors(encode("1011", p4), p4)) == ["0110", "0111"]
    assert 0 in successors(0, p4)


def test_successor_predecessor_duality(p4):
    for u in range(p4.size):
        for v in range(p4.size):
            assert (v in successors(u, p4)) == (u in predecessors(v, p4))


def test_successors_match_string_shift():
    p = GraphParams(3, 3)
    for w in all_words(3, 3):
        got = sorted(decode(v, p) for v in successors(encode(w, p), p))
        assert got == sorted(w[1:] + str(a) for a in range(3))


def test_rotate(p4):
    assert decode(rotate(encode("1011", p4), p4), p4) == "0111"
    assert decode(rotate(encode("0111", p4), p4), p4) == "1110"
    assert rotate(15, p4) == 15


def test_pcr_sizes(p4):
    assert sorted(len(c.members) for c in enumerate_pcrs(p4)) == sorted([1, 1, 4, 4, 2, 4])
    assert len(enumerate_pcrs(GraphParams(2, 2))) == 3


def test_pcrs_k3(p3):
    got = sorted(sorted(decode(u, p3) for u in c.members) for c in enumerate_pcrs(p3))
    assert got == sorted([["000"], ["111"], ["001", "010", "100"], ["011", "101", "110"]])


@pytest.mark.parametrize("sigma,k", [(2, 6), (3, 4), (4, 3)])
def test_pcrs_match_string_necklaces(sigma, k):
    p = GraphParams(sigma, k)
    ours = sorted(sorted(decode(u, p) for u in c.members) for c in enumerate_pcrs(p))
    assert ours == sorted(necklaces(sigma, k))


def test_pcr_members_in_rotation_order(p4):
    for c in enumerate_pcrs(p4):
        assert c.id == min(c.members)
        assert c.members[0] == c.id
        for a, b in zip(c.members, c.members[1:]):
            assert rotate(a, p4) == b
        assert pcr_of(c.members[-1], p4) == c


def test_pcr_index_partitions(p4):
    idx = pcr_index(p4)
    pcrs = enumerate_pcrs(p4)
    for i, c in enumerate(pcrs):
        assert all(idx[u] == i for u in c.members)
    assert sum(len(c.members) for c in pcrs) == p4.size


def test_companions(p3):
    f = encode("01", GraphParams(2, 2))
    assert sorted(decode(u, p3) for u in left_companions(f, p3)) == ["001", "101"]
    assert sorted(decode(u, p3) for u in right_companions(f, p3)) == ["010", "011"]
    ones = 3
    assert 7 in left_companions(ones, p3) and 7 in right_companions(ones, p3)


def test_every_non_homopolymer_in_one_lc_and_one_rc(p4):
    homs = {0, 15}
    for u in range(p4.size):
        in_lc = sum(u in left_companions(f, p4) for f in range(p4.prefix_count))
        in_rc = sum(u in right_companions(f, p4) for f in range(p4.prefix_count))
        assert (in_lc, in_rc) == (1, 1)
        if u not in homs:
            assert not any(u in left_companions(f, p4) and u in right_companions(f, p4)
                           for f in range(p4.prefix_count))


def test_homopolymer_symbol():
    p = GraphParams(3, 3)
    assert homopolymer_symbol(encode("22", GraphParams(3, 2)), p) == 2
    assert homopolymer_symbol(encode("21", GraphParams(3, 2)), p) is None


@pytest.mark.parametrize("sigma,k,neck,sets", [(2, 4, 6, 128), (2, 3, 4, 9), (2, 2, 3, 2)])
def test_counts(sigma, k, neck, sets):
    p = GraphParams(sigma, k)
    assert necklace_count(p) == neck
    assert pcr_set_count(p) == sets


@pytest.mark.parametrize("sigma,k", [(2, 9), (3, 5), (4, 4)])
def test_counts_agree_with_enumeration(sigma, k):
    p = GraphParams(sigma, k)
    pcrs = enumerate_pcrs(p)
    assert necklace_count(p) == len(pcrs)
    assert pcr_set_count(p) == int(np.prod([len(c.members) for c in pcrs], dtype=object))


def test_pcr_set_count_large_closed_form():
    p = GraphParams(2, 20)
    assert necklace_count(p) == 52488
    bits = pcr_set_count(p).bit_length()
    assert bits > 200_000


def test_kmerset_basics(p4):
    s = KmerSet(p4, [1, 2, 3])
    assert len(s) == 3 and 2 in s and 4 not in s
    s.flip(2)
    s.add(9)
    s.discard(1)
    assert list(s) == [3, 9]
    assert s == KmerSet(p4, [9, 3])
    assert hash(s) == hash(KmerSet(p4, [3, 9]))
    t = s.copy()
    t.add(0)
    assert 0 not in s
    assert len(KmerSet.full(p4)) == 16


def test_kmerset_rejects_out_of_range(p4):
    with pytest.raises(KmerError):
        KmerSet(p4, [16])


def test_set_file_round_trip(tmp_path, p4):
    s = KmerSet(p4, [0, 5, 15])
    text = format_kmer_set(s)
    assert text == "2 4\n0000\n0101\n1111\n"
    assert parse_kmer_set("# comment\n2 4\n0000  # trailing\n\n0101\n1111\n") == s
    path = tmp_path / "s.txt"
    write_kmer_set(s, path)
    assert read_kmer_set(path) == s


def test_parse_errors():
    with pytest.raises(KmerError):
        parse_kmer_set("0000\n")
    with pytest.raises(KmerError):
        parse_kmer_set("")
    with pytest.raises(KmerError):
        parse_kmer_set("2 4\n012\n")
