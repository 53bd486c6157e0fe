use std::sync::Arc;

use proptest::prelude::*;

use gamma_aq::algebra::{build_lam, classical_d0, monomial_algebra, FiniteModule, DEFAULT_LEVEL_CAP};
use gamma_aq::gamma::{gamma_lambda, partitions_up_to, pi0, representable, GammaModule};
use gamma_aq::resolution::relative_pi;
use gamma_aq::{with_field, FieldSpec, Result};

fn field_spec() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::Prime(2)),
        Just(FieldSpec::Prime(3)),
        Just(FieldSpec::Prime(5))
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// π₀ L(K[x]/(x^k), M) = Ω¹ ⊗ M for the regular and residue modules.
    #[test]
    fn pi0_is_kaehler_for_truncated_polynomials(spec in field_spec(), k in 1u32..5, regular in any::<bool>()) {
        let (p, d) = with_field!(spec, |field| {
            let (a, _) = monomial_algebra(&field, &["x"], &[vec![k]])?;
            let m = if regular { FiniteModule::regular(&a) } else { FiniteModule::residue(&a)? };
            let m = Arc::new(m);
            let l = build_lam(&m, 2, DEFAULT_LEVEL_CAP)?;
            Ok::<_, gamma_aq::Error>((pi0(&l)?.dim(), classical_d0(&m).dim))
        }).unwrap();
        prop_assert_eq!(p, d);
    }

    /// π^𝒴 is additive on direct sums.
    #[test]
    fn relative_pi_is_additive(spec in field_spec(), i in 0usize..7, j in 0usize..7) {
        let parts = partitions_up_to(3);
        let dims = with_field!(spec, |field| {
            let piece = |k: usize| -> Result<Arc<GammaModule<_>>> {
                if k < parts.len() { gamma_lambda(&field, &parts[k], 3) } else { representable(&field, 2, 3) }
            };
            let (a, b) = (piece(i)?, piece(j)?);
            let sum = GammaModule::direct_sum(&field, 3, vec![a.clone(), b.clone()])?;
            Ok::<_, gamma_aq::Error>((
                relative_pi(&a, 1, 3, 3)?.dims,
                relative_pi(&b, 1, 3, 3)?.dims,
                relative_pi(&sum, 1, 3, 3)?.dims,
            ))
        }).unwrap();
        let expect: Vec<usize> = dims.0.iter().zip(&dims.1).map(|(x, y)| x + y).collect();
        prop_assert_eq!(dims.2, expect);
    }
}
