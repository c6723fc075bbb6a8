"""
Tests for the helper rate functionals, protocol costs and the converse audit.
"""
import pytest

from qhelper.core.channels import random_isometry
from qhelper.core.errors import ChannelError, DimensionOverflowError, LayoutError, StateValidationError
from qhelper.core.qcore import SystemLayout, cond_entropy, entropy, purify, random_density
from qhelper.core.rates import (
    PHI_LABELS, HelperInstance, RatePoint, build_phi, converse_audit, decomposition_check,
    direct_part_total, fqsw_rates, fqsw_variant_total, helper_rates, merging_rates, naive_rate,
    rate_report,
)
from tests.conftest import H_34, h2


class TestRatePairs:
    def test_bell_identity_helper(self, bell, identity_helper):
        point = helper_rates(build_phi(HelperInstance(bell, identity_helper)))
        assert point.r1 == pytest.approx(-1.0, abs=1e-9)
        assert point.r2 == pytest.approx(1.0, abs=1e-9)

    def test_bell_discard_helper(self, bell, discard_helper):
        point = helper_rates(build_phi(HelperInstance(bell, discard_helper)))
        assert point.as_tuple() == pytest.approx((1.0, 0.0), abs=1e-9)

    def test_product_source(self, product_source, identity_helper, discard_helper):
        point = helper_rates(build_phi(HelperInstance(product_source, identity_helper)))
        assert point.r1 == pytest.approx(H_34, abs=1e-9)
        assert point.r2 == pytest.approx(h2(0.1), abs=1e-9)

        point = helper_rates(build_phi(HelperInstance(product_source, discard_helper)))
        assert point.as_tuple() == pytest.approx((H_34, 0.0), abs=1e-9)

    def test_phi_layout(self, bell, identity_helper):
        phi = build_phi(HelperInstance(bell, identity_helper))
        assert set(phi.phi.labels) == set(PHI_LABELS)

    def test_naive_rate_is_entropy_of_c(self, bell, identity_helper):
        phi = build_phi(HelperInstance(bell, identity_helper))
        assert naive_rate(phi) == pytest.approx(1.0, abs=1e-9)

    def test_negative_helper_rate_rejected(self):
        with pytest.raises(StateValidationError):
            RatePoint(0.0, -0.1)


class TestInstanceValidation:
    def test_source_labels(self, identity_helper):
        rho = random_density(SystemLayout.of(X=2, B=2), seed=1)
        with pytest.raises(LayoutError):
            HelperInstance(rho, identity_helper)

    def test_helper_dimension(self, bell):
        with pytest.raises(ChannelError):
            HelperInstance(bell, random_isometry(3, 2, 2, seed=1))


class TestIdentities:
    def test_decomposition_on_random_instances(self, random_sources):
        for i, rho in enumerate(random_sources):
            phi = build_phi(HelperInstance(rho, random_isometry(2, 2, 3, seed=[5, i])))
            assert decomposition_check(phi) < 1e-9
            assert entropy(phi.phi, PHI_LABELS) < 1e-9

    def test_direct_part_matches_rate_pair(self, random_sources):
        for i, rho in enumerate(random_sources):
            inst = HelperInstance(rho, random_isometry(2, 2, 4, seed=[6, i]))
            point = helper_rates(build_phi(inst))
            direct = direct_part_total(inst)
            assert direct.helper_qubits == pytest.approx(point.r2, abs=1e-9)
            assert direct.alice_ebits == pytest.approx(point.r1, abs=1e-9)
            variant = fqsw_variant_total(inst)
            assert variant.alice_net_ebits == pytest.approx(point.r1, abs=1e-9)

    def test_helper_rate_never_beats_full_side_information(self, random_sources):
        for i, rho in enumerate(random_sources[:30]):
            point = helper_rates(build_phi(HelperInstance(rho, random_isometry(2, 2, 3, seed=[8, i]))))
            assert point.r1 >= cond_entropy(rho, "A", "B") - 1e-8

    def test_merging_equals_fqsw_net(self, random_sources):
        for rho in random_sources:
            psi = purify(rho)
            merge, fqsw = merging_rates(psi), fqsw_rates(psi)
            assert merge.ebit_cost == pytest.approx(fqsw.qubit_cost - fqsw.ebit_gain, abs=1e-9)

    def test_rate_report_residuals_vanish(self, isotropic75):
        inst = HelperInstance(isotropic75, random_isometry(2, 2, 4, seed=2))
        report = rate_report(inst).to_dict()
        assert set(report["residuals"]) == {
            "decomposition", "direct_part_gap", "fqsw_variant_net", "merging_vs_fqsw", "global_purity",
        }
        assert max(report["residuals"].values()) < 1e-8
        assert report["naive"] >= report["r2"] - 1e-9


class TestConverseAudit:
    @pytest.mark.parametrize("n", [1, 2])
    def test_audit_passes(self, n):
        rho = random_density(SystemLayout.of(A=2, B=2), seed=21)
        inst = HelperInstance(rho, random_isometry(2, 2, 2, seed=22))
        residuals = converse_audit(inst, n)
        assert residuals
        assert all(r.passed for r in residuals)
        names = {r.name for r in residuals}
        assert {"chain_rule_entropy", "chain_rule_mutual_info", "dimension_bound", "monotonicity"} <= names

    def test_audit_with_joint_auxiliary_map(self):
        rho = random_density(SystemLayout.of(A=2, B=2), seed=23)
        inst = HelperInstance(rho, random_isometry(2, 2, 2, seed=24))
        residuals = converse_audit(inst, 2, aux=random_isometry(4, 2, 2, seed=25))
        assert all(r.passed for r in residuals)
        copy_rows = [r for r in residuals if r.copy_index == 2]
        assert {r.name for r in copy_rows} == {"mi_chain_split", "copy_independence", "monotonicity"}

    def test_audit_over_random_sources_and_maps(self):
        for i in range(20):
            rho = random_density(SystemLayout.of(A=2, B=2), seed=[30, i])
            inst = HelperInstance(rho, random_isometry(2, 2, 2, seed=[31, i]))
            residuals = converse_audit(inst, 2, aux=random_isometry(4, 2, 2, seed=[32, i]))
            assert max(r.residual for r in residuals) <= 1e-8

    def test_audit_rejects_large_n(self, bell, identity_helper):
        with pytest.raises(DimensionOverflowError):
            converse_audit(HelperInstance(bell, identity_helper), 3)

    def test_audit_dimension_cap(self):
        rho = random_density(SystemLayout.of(A=2, B=2), seed=26)
        inst = HelperInstance(rho, random_isometry(2, 2, 4, seed=27))
        with pytest.raises(DimensionOverflowError):
            converse_audit(inst, 2, max_dim=64)

    def test_residual_serialization(self, bell, identity_helper):
        row = converse_audit(HelperInstance(bell, identity_helper), 1)[0].to_dict()
        assert set(row) == {"name", "copy", "residual", "passed"}
