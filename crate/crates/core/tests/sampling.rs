use humbert_core::families::{matching_vector, FamilyId};
use humbert_core::siegel::{humbert_residual, in_siegel, sample_point, DiscriminantVector};

#[test]
fn thousand_samples_lie_on_their_surfaces() {
    let mut vectors: Vec<DiscriminantVector> = Vec::new();
    for m in 2..=10 {
        for family in FamilyId::all(m) {
            vectors.push(matching_vector(&family, m).unwrap());
        }
    }
    vectors.push(DiscriminantVector::new(1, -1, -2, 0, 0).unwrap());
    let mut checked = 0;
    for seed in 0u64.. {
        if checked == 1000 {
            break;
        }
        let v = vectors[seed as usize % vectors.len()];
        let tau = sample_point(&v, seed).unwrap_or_else(|e| panic!("{v}: {e}"));
        assert!(humbert_residual(&v, &tau).norm() < 1e-12, "{v}");
        assert!(in_siegel(tau.tau11, tau.tau12, tau.tau22));
        if v.a == 0 && v.d == 0 {
            let expected = -(tau.tau22 * v.c as f64 + v.e as f64) / v.b as f64;
            assert!((tau.tau12 - expected).norm() < 1e-15);
        }
        checked += 1;
    }
}
