"""The translation theorem, both directions, against the simulator."""

import random

import pytest

from pdapress import slp, translate, udpda
from pdapress.errors import EmptyWord, MalformedPair, NotDeterministic
from pdapress.slp import Slp
from pdapress.translate import (
    HALT_STATE,
    IndicatorPair,
    TranscriptPair,
    indicator_to_udpda,
    slp_to_udpda,
    transcript_to_characteristic,
    udpda_to_indicator,
    udpda_to_transcript,
)

from helpers import (
    BOTTOM,
    collect_events,
    handcrafted_machines,
    machine_even,
    machine_loop,
    machine_push_loop,
    random_normal_udpda,
    random_slp,
    step_normal,
)


def bits(word):
    return slp.literal(word, "01")


def events(word):
    return slp.literal(word, "af")


class TestSlpToUdpda:
    @pytest.mark.parametrize("word", ["101", "1", "0", "0110", "111000111"])
    def test_characteristic_is_padded_word(self, word):
        m = slp_to_udpda(bits(word))
        want = "0" + word + "0" * 5
        assert udpda.run_prefix(m, len(want)) == want

    def test_membership_examples(self):
        m = slp_to_udpda(bits("101"))
        got = [udpda.membership_sim(m, n) for n in range(5)]
        assert got == [False, True, False, True, False]

    def test_rejects_empty_word(self):
        with pytest.raises(EmptyWord):
            slp_to_udpda(Slp("01", {"S": ()}, "S"))

    def test_reaches_halt_after_exactly_word_length_reads(self):
        rng = random.Random(40)
        for _ in range(25):
            p = random_slp(rng, "01", min_len=1, max_len=500)
            n = slp.length(p)
            m = slp_to_udpda(p)
            q, stack, reads = m.initial, [m.bottom], 0
            for _ in range(100_000):
                if q == HALT_STATE:
                    break
                q, consumed = step_normal(m, q, stack)
                reads += consumed
            assert q == HALT_STATE
            assert reads == n
            assert stack == [m.bottom]

    @pytest.mark.parametrize("tight", [False, True])
    def test_state_count_linear(self, tight):
        rng = random.Random(41)
        for _ in range(40):
            p = random_slp(rng, "01", min_len=1, max_len=2000)
            m = slp_to_udpda(p, tight_stack=tight)
            assert len(m.states) <= 8 * slp.size(p) + 8

    def test_tight_stack_alphabet_is_constant(self):
        rng = random.Random(42)
        for _ in range(25):
            p = random_slp(rng, "01", min_len=1, max_len=2000)
            m = slp_to_udpda(p, tight_stack=True)
            assert len(m.stack_alphabet) <= 3
            assert m.size <= 24 * slp.size(p) + 24  # |Q| x |Gamma| stays linear
            want = "0" + slp.expand(p, 2000) + "000"
            assert udpda.run_prefix(m, len(want)) == want


class TestIndicatorToUdpda:
    @pytest.mark.parametrize(
        "prefix,loop,want",
        [
            ("1", "01", "101010101010"),
            ("", "1", "111111111111"),
            ("0", "0", "000000000000"),
            ("", "10", "101010101010"),
            ("0011", "010", "001101001001"[:12]),
            ("1", "1", "111111111111"),
        ],
    )
    def test_examples(self, prefix, loop, want):
        pair = IndicatorPair(bits(prefix), bits(loop))
        m = indicator_to_udpda(pair)
        assert udpda.run_prefix(m, 12) == pair.sequence(12) == want

    def test_random_pairs(self):
        rng = random.Random(43)
        for _ in range(60):
            prefix = random_slp(rng, "01", max_len=300)
            loop = random_slp(rng, "01", min_len=1, max_len=300)
            pair = IndicatorPair(prefix, loop)
            m = indicator_to_udpda(pair)
            n = slp.length(prefix) + 3 * slp.length(loop) + 2
            assert udpda.run_prefix(m, n) == pair.sequence(n)

    def test_loop_must_be_nonempty(self):
        with pytest.raises(MalformedPair):
            IndicatorPair(bits("1"), Slp("01", {"S": ()}, "S"))


class TestUdpdaToTranscript:
    def test_loop_machine(self):
        tp = udpda_to_transcript(machine_loop(), check_invariants=True)
        assert tp.sequence(20) == "fa" * 10
        assert tp.sequence(20) == collect_events(machine_loop(), 20)

    def test_even_machine(self):
        m = machine_even()
        tp = udpda_to_transcript(m, check_invariants=True)
        assert tp.sequence(50) == collect_events(m, 50)

    def test_consuming_machines_match_event_log(self):
        rng = random.Random(44)
        done = 0
        while done < 30:
            m = random_normal_udpda(rng, max_states=8)
            if udpda.run_prefix(m, 40).count("") is None:
                continue
            # only compare when the machine is still consuming at the horizon
            log = collect_events(m, 50, max_steps=5000)
            if log.count("a") < 12:
                continue
            tp = udpda_to_transcript(m, check_invariants=True)
            assert tp.sequence(len(log)) == log
            done += 1

    def test_push_loop_pair_is_well_formed(self):
        tp = udpda_to_transcript(machine_push_loop(), check_invariants=True)
        assert slp.length(tp.loop) >= 1
        assert transcript_to_characteristic(tp).sequence(6) == "000000"

    def test_invariants_on_small_machines(self):
        rng = random.Random(45)
        for _ in range(40):
            m = random_normal_udpda(rng, max_states=10, max_stack=3)
            udpda_to_transcript(m, check_invariants=True)

    def test_transcript_size_linear(self):
        rng = random.Random(46)
        for _ in range(60):
            m = random_normal_udpda(rng)
            tp = udpda_to_transcript(m)
            assert tp.size <= 64 * len(m.states) + 64


class TestTranscriptToCharacteristic:
    def oracle(self, stream):
        """Definition-level scan: bit i is 1 iff an f sits between the i-th
        and (i+1)-th a of the stream."""
        out = []
        seen_f = False
        for sym in stream:
            if sym == "f":
                seen_f = True
            else:
                out.append("1" if seen_f else "0")
                seen_f = False
        return "".join(out)

    @pytest.mark.parametrize(
        "prefix,loop,want",
        [
            ("", "fa", "1" * 16),
            ("a", "a", "0" * 16),
            ("a", "f", "01" + "0" * 14),
            ("fa", "fa", "1" * 16),
            ("af", "af", "0" + "1" * 15),
            ("aaf", "fa", "0011" + "1" * 12),
            ("f", "aaf", None),
            ("afaf", "a", "011" + "0" * 13),
            ("ff", "aaffa", None),
            ("fafff", "ffaaf", None),
            ("", "faf", None),
            ("aa", "fffa", None),
        ],
    )
    def test_examples(self, prefix, loop, want):
        tp = TranscriptPair(events(prefix), events(loop))
        got = transcript_to_characteristic(tp).sequence(16)
        stream = prefix + loop * ((64 - len(prefix)) // len(loop) + 1)
        expect = self.oracle(stream)[:16] if want is None else want
        assert got == expect

    def test_against_definition_oracle_random(self):
        rng = random.Random(47)
        for _ in range(300):
            prefix = "".join(rng.choice("af") for _ in range(rng.randint(0, 12)))
            loop = "".join(rng.choice("af") for _ in range(rng.randint(1, 12)))
            tp = TranscriptPair(events(prefix), events(loop))
            got = transcript_to_characteristic(tp)
            stream = prefix + loop * ((200 - len(prefix)) // len(loop) + 1)
            want = self.oracle(stream)
            n = min(len(want), 64)
            assert got.sequence(n) == want[:n], (prefix, loop)

    def test_compressed_inputs(self):
        # long transcripts stay compressed end to end
        tp = TranscriptPair(
            slp.power(events("af"), 1 << 30),
            slp.concat(slp.power(events("a"), (1 << 30) - 1), events("f")),
        )
        pair = transcript_to_characteristic(tp)
        assert slp.query(pair.prefix, 12345) == "1"
        assert slp.length(pair.prefix) + 0 >= 1 << 30


class TestFullPipeline:
    def test_handcrafted_round_trips(self):
        for label, m in handcrafted_machines():
            pair = udpda_to_indicator(m, check_invariants=len(m.states) <= 10)
            n = min(slp.length(pair.prefix) + 3 * slp.length(pair.loop), 500)
            n = max(n, 40)
            assert pair.sequence(n) == udpda.run_prefix(m, n), label

    def test_slp_round_trip(self):
        m = slp_to_udpda(bits("101"))
        pair = udpda_to_indicator(m)
        assert pair.sequence(9) == "010100000"

    def test_dead_machine_all_zero(self):
        from helpers import machine_dead
        pair = udpda_to_indicator(machine_dead())
        assert pair.sequence(30) == "0" * 30

    def test_raw_input_checked(self):
        bad = udpda.RawUnpda(
            states=frozenset({"q0"}),
            stack_alphabet=frozenset({BOTTOM}),
            bottom=BOTTOM,
            initial="q0",
            finals=frozenset(),
            transitions=frozenset({("q0", "a", BOTTOM, "q0", (BOTTOM,)),
                                   ("q0", "", BOTTOM, "q0", (BOTTOM,))}),
        )
        with pytest.raises(NotDeterministic):
            udpda_to_indicator(bad)

    def test_scheduling_is_deterministic(self):
        rng = random.Random(48)
        for _ in range(20):
            m = random_normal_udpda(rng)
            p1 = udpda_to_indicator(m)
            p2 = udpda_to_indicator(m)
            assert slp.format_slp(p1.prefix) == slp.format_slp(p2.prefix)
            assert slp.format_slp(p1.loop) == slp.format_slp(p2.loop)


class TestPairFormat:
    def test_indicator_round_trip(self):
        pair = udpda_to_indicator(machine_even())
        text = translate.format_pair(pair)
        back = translate.parse_pair(text)
        assert isinstance(back, IndicatorPair)
        assert back.sequence(40) == pair.sequence(40)
        assert translate.format_pair(back) == text

    def test_transcript_round_trip(self):
        tp = udpda_to_transcript(machine_even())
        back = translate.parse_pair(translate.format_pair(tp))
        assert isinstance(back, TranscriptPair)
        assert back.sequence(40) == tp.sequence(40)

    def test_bad_header(self):
        from pdapress.errors import FormatError
        with pytest.raises(FormatError):
            translate.parse_pair("alphabet: 01\nS -> 0\n---\nS -> 1\n")
