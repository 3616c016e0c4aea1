"""DSL parser, protocol checker, and interpreter."""

from pathlib import Path

import numpy as np
import pytest

from spinwhiten import rng
from spinwhiten.errors import ProtocolError, PulseSyntaxError
from spinwhiten.program import (
    Acquire,
    Encode,
    Iqft,
    Pulse90,
    Qft,
    Whiten,
    check,
    execute,
    format_program,
    parse,
)

GOLDEN_DIR = Path(__file__).parent / "golden"
MAGIC_SEED = rng.seed_for_gamma(5 / 16)  # = 3192346357569502190

CANONICAL = (
    "pulse90 t\n"
    f"whiten t seed={MAGIC_SEED}\n"
    "encode r 4\n"
    "iqft r\n"
    "acquire shots=4096\n"
)


class TestParse:
    def test_five_statement_program(self):
        program = parse("pulse90 t\nwhiten t seed=7\nencode r 4\niqft r\nacquire shots=1024")
        assert program.statements == (
            Pulse90("t"),
            Whiten("t", 7),
            Encode("r", 4),
            Iqft("r"),
            Acquire(1024),
        )
        assert [s.line_no for s in program.statements] == [1, 2, 3, 4, 5]

    def test_empty_source(self):
        assert parse("").statements == ()

    def test_comments_and_blanks_ignored(self):
        program = parse("# ppv1\n\n  # note\npulse90 t  # trailing\n")
        assert program.statements == (Pulse90("t"),)
        assert program.statements[0].line_no == 4

    def test_whiten_without_seed(self):
        assert parse("whiten t").statements == (Whiten("t", None),)

    def test_qft_with_wrong_arity_is_syntax_error(self):
        with pytest.raises(PulseSyntaxError) as info:
            parse("qft 4 r")
        assert info.value.line == 1

    def test_register_name_must_be_a_name(self):
        with pytest.raises(PulseSyntaxError) as info:
            parse("qft 4")
        assert info.value.line == 1
        assert info.value.column == 5

    def test_unknown_keyword(self):
        with pytest.raises(PulseSyntaxError) as info:
            parse("pulse90 t\nrelax t")
        assert info.value.line == 2
        assert info.value.column == 1

    def test_malformed_option(self):
        with pytest.raises(PulseSyntaxError):
            parse("acquire shots")
        with pytest.raises(PulseSyntaxError):
            parse("acquire count=5")
        with pytest.raises(PulseSyntaxError):
            parse("whiten t seed=abc")

    def test_non_integer_qubits(self):
        with pytest.raises(PulseSyntaxError) as info:
            parse("encode r four")
        assert info.value.column == 10

    def test_rejects_non_positive_counts(self):
        with pytest.raises(PulseSyntaxError):
            parse("encode r 0")
        with pytest.raises(PulseSyntaxError):
            parse("acquire shots=0")

    def test_rejects_uppercase_names(self):
        with pytest.raises(PulseSyntaxError):
            parse("pulse90 Target")

    def test_error_reports_source_column(self):
        with pytest.raises(PulseSyntaxError) as info:
            parse("pulse90     97bad")
        assert info.value.column == 13


class TestRoundTrip:
    @pytest.mark.parametrize(
        "path", sorted(GOLDEN_DIR.glob("*.pp")), ids=lambda p: p.stem
    )
    def test_golden_corpus(self, path):
        source = path.read_text(encoding="utf-8")
        program = parse(source, source_name=path.name)
        printed = format_program(program)
        assert parse(printed) == program
        # printing is canonical: a second pass is byte-identical
        assert format_program(parse(printed)) == printed

    def test_corpus_has_twenty_programs(self):
        assert len(list(GOLDEN_DIR.glob("*.pp"))) == 20


class TestCheck:
    def test_canonical_program_passes(self):
        program = parse(CANONICAL)
        assert check(program) is program

    def test_whiten_requires_prior_pulse(self):
        with pytest.raises(ProtocolError) as info:
            check(parse("whiten t"))
        assert info.value.line == 1

    def test_whiten_target_must_match_pulse_target(self):
        with pytest.raises(ProtocolError):
            check(parse("pulse90 a\nwhiten b"))

    def test_encode_requires_prior_whiten(self):
        with pytest.raises(ProtocolError) as info:
            check(parse("encode r 4"))
        assert info.value.line == 1

    def test_transform_requires_encoded_register(self):
        source = "pulse90 t\nwhiten t\nencode r 4\niqft other"
        with pytest.raises(ProtocolError) as info:
            check(parse(source))
        assert info.value.line == 4

    def test_acquire_requires_a_register(self):
        with pytest.raises(ProtocolError) as info:
            check(parse("pulse90 t\nwhiten t\nacquire shots=8"))
        assert info.value.line == 3


class TestExecute:
    def test_dyadic_representative_concentrates(self):
        program = parse(CANONICAL)
        # oracle first: the exact final distribution puts everything on 5
        report = execute(program, ensemble_size=100, master_seed=1)
        assert report.peak[0] == 5
        assert report.peak[1] >= 1 - 1e-12
        assert report.histogram.sum() == 4096
        assert report.histogram[5] / 4096 >= 0.99

    def test_histogram_counts_sum_to_shots(self):
        source = CANONICAL.replace("acquire shots=4096", "acquire shots=100\nacquire shots=50")
        report = execute(parse(source), ensemble_size=10, master_seed=0)
        assert report.shots == 150
        assert report.histogram.sum() == 150

    def test_execute_checks_protocol(self):
        with pytest.raises(ProtocolError):
            execute(parse("whiten t"), ensemble_size=10, master_seed=0)

    def test_bit_reproducible(self):
        program = parse(CANONICAL)
        a = execute(program, ensemble_size=500, master_seed=9)
        b = execute(program, ensemble_size=500, master_seed=9)
        assert np.array_equal(a.histogram, b.histogram)
        assert a.to_json_dict() == b.to_json_dict()

    def test_master_seed_changes_unseeded_whiten(self):
        source = "pulse90 t\nwhiten t\nencode r 6\niqft r\nacquire shots=64"
        a = execute(parse(source), ensemble_size=50, master_seed=1)
        b = execute(parse(source), ensemble_size=50, master_seed=2)
        assert a.to_json_dict() != b.to_json_dict()

    def test_explicit_seed_overrides_master(self):
        a = execute(parse(CANONICAL), ensemble_size=50, master_seed=1)
        b = execute(parse(CANONICAL), ensemble_size=50, master_seed=2)
        # whitening pinned by statement seed: same gamma, same histogram mode
        assert a.peak == b.peak
        assert int(a.histogram.argmax()) == int(b.histogram.argmax())

    def test_receiver_recorded_before_and_after(self):
        report = execute(parse(CANONICAL), ensemble_size=10_000, master_seed=3)
        receiver = report.receiver["t"]
        assert receiver["before_whiten"] == pytest.approx(1.0, abs=1e-12)
        assert receiver["after_whiten"] <= 5 / np.sqrt(10_000)

    def test_dyadic_modes_across_sizes(self):
        for n, k in [(2, 1), (4, 11), (6, 40), (8, 200)]:
            seed = rng.seed_for_gamma(k / (1 << n))
            source = (
                "pulse90 t\n"
                f"whiten t seed={seed}\n"
                f"encode r {n}\n"
                "iqft r\n"
                "acquire shots=256\n"
            )
            report = execute(parse(source), ensemble_size=8, master_seed=0)
            assert int(report.histogram.argmax()) == k
            assert report.peak[0] == k

    def test_forward_transform_lands_on_negated_index(self):
        # encode(k/2^n) equals the forward transform of |k>, and the
        # transform squared is the parity permutation, so qft (not iqft)
        # concentrates on -k mod 2^n.
        seed = rng.seed_for_gamma(5 / 16)
        source = (
            "pulse90 t\n"
            f"whiten t seed={seed}\n"
            "encode r 4\n"
            "qft r\n"
            "acquire shots=512\n"
        )
        report = execute(parse(source), ensemble_size=8, master_seed=0)
        assert report.peak[0] == (16 - 5) % 16
        assert report.peak[1] >= 1 - 1e-12

    def test_rejects_bad_ensemble_size(self):
        with pytest.raises(ValueError):
            execute(parse(CANONICAL), ensemble_size=0, master_seed=0)

    def test_register_size_capped_by_max_qubits(self):
        from spinwhiten.errors import QubitCountExceeded

        source = "pulse90 t\nwhiten t\nencode r 5\niqft r\nacquire shots=4"
        with pytest.raises(QubitCountExceeded):
            execute(parse(source), ensemble_size=4, master_seed=0, max_qubits=4)
        report = execute(parse(source), ensemble_size=4, master_seed=0, max_qubits=5)
        assert report.histogram.sum() == 4


class TestRunReportJson:
    def test_shape_and_determinism_fields(self):
        report = execute(parse(CANONICAL), ensemble_size=20, master_seed=4)
        doc = report.to_json_dict()
        assert doc["source"] == "<string>"
        assert doc["ensemble_size"] == 20
        assert doc["master_seed"] == 4
        assert [entry["op"] for entry in doc["statements"]] == [
            "pulse90", "whiten", "encode", "iqft", "acquire",
        ]
        assert all("elapsed_s" not in entry for entry in doc["statements"])
        assert sum(item["count"] for item in doc["histogram"]) == 4096
        assert doc["peak_readout"]["index"] == 5

    def test_timings_opt_in(self):
        report = execute(parse(CANONICAL), ensemble_size=20, master_seed=4)
        doc = report.to_json_dict(include_timings=True)
        assert all(entry["elapsed_s"] >= 0 for entry in doc["statements"])

    def test_histogram_lists_only_populated_bins(self):
        report = execute(parse(CANONICAL), ensemble_size=20, master_seed=4)
        doc = report.to_json_dict()
        assert all(item["count"] > 0 for item in doc["histogram"])
