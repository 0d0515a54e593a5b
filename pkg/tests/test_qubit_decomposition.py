import json
from dataclasses import replace
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wernerppt.errors import CertificateError, DomainError
from wernerppt.qubit_decomposition import (
    ALPHABET,
    DecompositionTerm,
    assemble,
    brute_force_terms,
    build_decomposition,
    count_terms,
    critical_epsilon,
    enumerate_terms,
    generating_expansion,
    generating_products,
    index_admissible,
    label_sum,
    verify_separability_certificate,
    verify_terms,
)
from wernerppt.states import I2, SIGMA_1, SIGMA_2, build_werner, projector
from wernerppt.tensor_core import SystemShape, kron_power, partial_transpose


class TestAdmissible:
    @pytest.mark.parametrize(
        "labels,expected",
        [((1, 1), True), ((1, -1), False), ((2, -2), True), ((2, 2), False), ((-1, -1), True), ((2, 1), False)],
    )
    def test_examples(self, labels, expected):
        assert index_admissible(labels) is expected

    def test_four_twos(self):
        assert index_admissible((2, 2, 2, 2))
        assert not index_admissible((2, 2, 2, -2))
        assert index_admissible((2, 2, 2, -2, -1))

    def test_invalid_label(self):
        with pytest.raises(DomainError):
            index_admissible((1, 3))

    @given(st.lists(st.sampled_from(ALPHABET), min_size=2, max_size=9))
    def test_sign_flip_on_axis_one_toggles(self, labels):
        # flipping the sign of one axis-1 label changes the negative count parity
        if 1 in labels:
            i = labels.index(1)
            flipped = labels[:i] + [-1] + labels[i + 1 :]
            twos = sum(abs(x) == 2 for x in labels)
            if twos % 2 == 0:
                assert index_admissible(labels) != index_admissible(flipped)


class TestEnumeration:
    def test_two(self):
        assert set(enumerate_terms(2)) == {(1, 1), (-1, -1), (2, -2), (-2, 2)}

    @pytest.mark.parametrize("d", range(2, 8))
    def test_matches_brute_force(self, d):
        assert enumerate_terms(d) == brute_force_terms(d)

    def test_three(self):
        assert len(enumerate_terms(3)) == 16

    @pytest.mark.parametrize("d", range(2, 11))
    def test_count_law(self, d):
        assert count_terms(d) == 4 ** (d - 1)

    def test_limits(self):
        with pytest.raises(DomainError):
            enumerate_terms(13)
        with pytest.raises(DomainError):
            enumerate_terms(1)

    @pytest.mark.parametrize("d", range(2, 8))
    def test_trace_identity(self, d):
        eps_c = critical_epsilon(d)
        assert count_terms(d) * eps_c / 2 ** (d - 1) + 2 * eps_c / 2 == 1


class TestBuild:
    def test_two(self):
        terms = build_decomposition(2)
        assert len(terms) == 6
        assert all(t.weight == Fraction(1, 6) for t in terms)

    def test_three(self):
        terms = build_decomposition(3)
        assert len(terms) == 18
        assert [t.weight for t in terms[:2]] == [Fraction(1, 10)] * 2
        assert all(t.weight == Fraction(1, 20) for t in terms[2:])
        assert terms[0].is_pole and not terms[2].is_pole

    @pytest.mark.parametrize("d", range(2, 8))
    def test_normalised(self, d):
        assert sum(t.weight for t in build_decomposition(d)) == 1


class TestAssemble:
    @pytest.mark.parametrize("d", [2, 3])
    def test_equals_state(self, d):
        rho = build_werner(SystemShape(2, d), Fraction(1, 2 ** (d - 1) + 1))
        assert np.max(np.abs(assemble(build_decomposition(d)) - rho)) <= 1e-12

    def test_single_pole(self):
        term = DecompositionTerm.from_label(Fraction(1), (3, 3))
        np.testing.assert_array_equal(assemble([term]), np.diag([1, 0, 0, 0]))

    def test_batches_agree(self):
        terms = build_decomposition(4)
        np.testing.assert_allclose(assemble(terms, batch=7), sum(float(t.weight) * t.matrix() for t in terms), atol=1e-15)

    def test_empty(self):
        with pytest.raises(DomainError):
            assemble([])


class TestGenerating:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_closed_forms(self, d):
        g = generating_products(d)
        np.testing.assert_allclose(g.t0, 2**d * np.eye(2**d), atol=1e-13)
        np.testing.assert_allclose(g.t1, 0, atol=1e-13)
        np.testing.assert_allclose(g.s2, kron_power(SIGMA_1 + 1j * SIGMA_2, d), atol=1e-13)
        np.testing.assert_allclose(g.s3, kron_power(SIGMA_1 - 1j * SIGMA_2, d), atol=1e-13)
        # conjugate coefficients on Hermitian projectors: the adjoint
        np.testing.assert_allclose(g.s3, g.s2.conj().T, atol=1e-13)
        np.testing.assert_allclose(g.t3, g.t2.conj().T, atol=1e-13)

    def test_s2_entries_three_qubits(self):
        expected = np.zeros((8, 8))
        expected[0, 7] = 8
        np.testing.assert_allclose(generating_products(3).s2, expected, atol=1e-13)

    @pytest.mark.parametrize("d", [3, 4])
    def test_r_combinations(self, d):
        g = generating_products(d)
        tuples = list(product(ALPHABET, repeat=d))

        def sector(pred):
            return label_sum(t for t in tuples if pred(sum(abs(x) == 2 for x in t), sum(x < 0 for x in t)))

        np.testing.assert_allclose((g.t0 + g.s0) / 2, sector(lambda tw, ng: ng % 2 == 0), atol=1e-12)
        np.testing.assert_allclose((g.t0 - g.s0) / 2, sector(lambda tw, ng: ng % 2 == 1), atol=1e-12)
        np.testing.assert_allclose((g.t0 + g.t1 + g.t2 + g.t3) / 4, sector(lambda tw, ng: tw % 4 == 0), atol=1e-12)
        np.testing.assert_allclose((g.t0 + g.t1 - g.t2 - g.t3) / 4, sector(lambda tw, ng: tw % 4 == 2), atol=1e-12)
        ts, ss = (g.t0, g.t1, g.t2, g.t3), (g.s0, g.s1, g.s2, g.s3)
        even = [(t + s) / 2 for t, s in zip(ts, ss)]
        odd = [(t - s) / 2 for t, s in zip(ts, ss)]
        np.testing.assert_allclose(sum(even) / 4, sector(lambda tw, ng: tw % 4 == 0 and ng % 2 == 0), atol=1e-12)
        np.testing.assert_allclose(
            (odd[0] + odd[1] - odd[2] - odd[3]) / 4, sector(lambda tw, ng: tw % 4 == 2 and ng % 2 == 1), atol=1e-12
        )
        quarter = (g.t0 + g.t1 + g.s2 + g.s3) / 4
        np.testing.assert_allclose(quarter, (sum(even) + odd[0] + odd[1] - odd[2] - odd[3]) / 4, atol=1e-12)
        np.testing.assert_allclose(quarter, label_sum(enumerate_terms(d)), atol=1e-12)

    @pytest.mark.parametrize("d", range(2, 8))
    def test_routes_agree(self, d):
        assert np.max(np.abs(generating_expansion(d) - assemble(build_decomposition(d)))) <= 1e-12


class TestCertificate:
    @pytest.mark.parametrize("d", [2, 6])
    def test_valid(self, d):
        cert = verify_separability_certificate(d)
        assert cert.max_deviation <= (1e-15 if d == 2 else 1e-12)
        assert len(cert.terms) == 4 ** (d - 1) + 2

    def test_negated_weight(self):
        terms = build_decomposition(2)
        terms[3] = replace(terms[3], weight=-terms[3].weight)
        with pytest.raises(CertificateError) as info:
            verify_terms(terms, 2)
        assert info.value.term is terms[3]

    def test_bad_factor(self):
        terms = build_decomposition(2)
        terms[0] = replace(terms[0], factors=(I2 / 2, projector(3)))
        with pytest.raises(CertificateError, match="idempotent"):
            verify_terms(terms, 2)

    def test_wrong_state(self):
        terms = build_decomposition(2)
        terms[2], terms[3] = (replace(t, weight=w) for t, w in zip(terms[2:4], (Fraction(1, 12), Fraction(1, 4))))
        with pytest.raises(CertificateError, match="deviates"):
            verify_terms(terms, 2)

    def test_missing_term(self):
        with pytest.raises(CertificateError, match="sum"):
            verify_terms(build_decomposition(3)[:-1], 3)

    def test_json(self):
        payload = json.loads(json.dumps(verify_separability_certificate(2).to_json()))
        assert payload["d"] == 2 and payload["epsilon"] == "1/3"
        assert len(payload["terms"]) == 6
        first = payload["terms"][0]
        assert first["weight"] == "1/6" and first["label"] == [3, 3]
        assert first["factors"][0] == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_partial_transpose_boundary(self, d):
        shape = SystemShape(2, d)
        rho = assemble(build_decomposition(d))
        for mask in shape.bipartitions(canonical=False):
            lam = np.linalg.eigvalsh(partial_transpose(rho, shape, mask))[0]
            assert lam >= -1e-10
            if mask.size == 1:
                assert abs(lam) <= 1e-10
