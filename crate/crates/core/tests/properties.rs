use hgpcert::codes::{
    alist, canonical_form_with_order, distance, find_simultaneous_bipuncture, is_puncture,
    is_robust, ClassicalCode, DEFAULT_DISTANCE_LIMIT,
};
use hgpcert::css::PauliKind;
use hgpcert::css::{is_correctable, separation, CssCode, QubitRegion};
use hgpcert::f2::{self, BitMatrix, BitVec, RowSpace};
use hgpcert::hgp::{decompose_taut, logical_basis, product, Sector};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (0..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
            let rows = bits
                .chunks(c.max(1))
                .take(r)
                .map(|ch| BitVec::from_bools(ch.iter().copied()))
                .collect();
            BitMatrix::from_rows(rows, c).unwrap()
        })
    })
}

fn matrix_exact(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
        let rows_v = (0..rows)
            .map(|r| BitVec::from_bools(bits[r * cols..(r + 1) * cols].iter().copied()))
            .collect();
        BitMatrix::from_rows(rows_v, cols).unwrap()
    })
}

fn vectors(n: usize) -> impl Iterator<Item = BitVec> {
    (0u32..1 << n).map(move |x| BitVec::from_bools((0..n).map(|i| x >> i & 1 == 1)))
}

fn bits(seed: u64, salt: u64, len: usize) -> BitVec {
    let mut s = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    BitVec::from_bools((0..len).map(|_| {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        s >> 63 == 1
    }))
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |x| (0..n).filter(|i| x >> i & 1 == 1).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euler_identity(h in matrix(10, 10)) {
        let code = ClassicalCode::from_parity_check(h);
        let (n, m) = (code.n() as isize, code.m() as isize);
        prop_assert_eq!(code.k() as isize - n + m - code.k_transpose() as isize, 0);
    }

    #[test]
    fn kernel_and_cokernel_annihilate(h in matrix(9, 9)) {
        let k = f2::kernel(&h);
        prop_assert!(h.mul(&k).unwrap().is_zero());
        let c = f2::cokernel(&h);
        prop_assert!(c.mul(&h).unwrap().is_zero());
        prop_assert_eq!(f2::rank(&k), h.ncols() - f2::rank(&h));
        prop_assert_eq!(c.nrows(), h.nrows() - f2::rank(&h));
    }

    #[test]
    fn rank_is_transpose_invariant(h in matrix(12, 12)) {
        prop_assert_eq!(f2::rank(&h), f2::rank(&h.transpose()));
    }

    #[test]
    fn kernel_matches_enumeration(h in matrix(6, 7)) {
        let rs = RowSpace::new(&f2::kernel_basis(&h));
        for v in vectors(h.ncols()) {
            prop_assert_eq!(h.mul_vec(&v).unwrap().is_zero(), rs.contains(&v));
        }
    }

    #[test]
    fn kron_mixed_product(
        a in matrix_exact(2, 3), c in matrix_exact(3, 2),
        b in matrix_exact(3, 2), d in matrix_exact(2, 4),
    ) {
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rowspace_membership_witness(m in matrix(6, 8), coeffs in any::<u8>()) {
        let c = BitVec::from_bools((0..m.nrows()).map(|i| coeffs >> i & 1 == 1));
        let v = m.combine_rows(&c).unwrap();
        let w = f2::rowspace_member(&m, &v).unwrap().expect("combination is in the row space");
        prop_assert_eq!(m.combine_rows(&w).unwrap(), v);
    }

    #[test]
    fn redundant_rows_keep_punctures(h in matrix(5, 7), coeffs in any::<u8>(), mask in any::<u8>()) {
        let extra = h.combine_rows(&BitVec::from_bools((0..h.nrows()).map(|i| coeffs >> i & 1 == 1))).unwrap();
        let mut padded = h.clone();
        padded.push_row(extra).unwrap();
        let gamma: Vec<usize> = (0..h.ncols()).filter(|i| mask >> i & 1 == 1).collect();
        prop_assert_eq!(is_puncture(&h, &gamma).unwrap(), is_puncture(&padded, &gamma).unwrap());
        let (a, b) = (ClassicalCode::from_parity_check(h), ClassicalCode::from_parity_check(padded));
        prop_assert_eq!(a.k(), b.k());
        prop_assert_eq!(is_robust(&a).unwrap().verdict, is_robust(&b).unwrap().verdict);
    }

    #[test]
    fn small_subsets_puncture_generator(h in matrix(6, 8)) {
        let code = ClassicalCode::from_parity_check(h);
        if let Some(d) = distance(&code, DEFAULT_DISTANCE_LIMIT) {
            for gamma in subsets(code.n()).filter(|s| s.len() < d) {
                prop_assert!(is_puncture(code.generator(), &gamma).unwrap());
            }
            // some d-subset (a minimum-weight codeword) is not a puncture
            prop_assert!(subsets(code.n()).filter(|s| s.len() == d)
                .any(|s| !is_puncture(code.generator(), &s).unwrap()));
        }
    }

    #[test]
    fn copivot_and_pivot_identities(h in matrix(6, 8), seed in any::<u64>()) {
        let code = ClassicalCode::from_parity_check(h);
        let (n, k) = (code.n(), code.k());
        prop_assume!(k >= 1);
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let cf = canonical_form_with_order(&code, &order).unwrap();
        // canonical generator (I_k J) in permuted coordinates
        let g = BitMatrix::identity(k).hstack(&cf.j).unwrap();
        prop_assert!(cf.parity.mul(&g.transpose()).unwrap().is_zero());
        // copivots: every subset of {k..n} punctures G
        for sub in subsets(n - k) {
            let gamma: Vec<usize> = sub.iter().map(|c| c + k).collect();
            prop_assert!(is_puncture(&g, &gamma).unwrap());
        }
        // pivots: gamma ⊆ [k] punctures G iff it punctures coker(J)
        let coker_j = f2::cokernel(&cf.j);
        for gamma in subsets(k) {
            prop_assert_eq!(
                is_puncture(&g, &gamma).unwrap(),
                is_puncture(&coker_j, &gamma).unwrap()
            );
        }
    }

    #[test]
    fn robust_verdict_matches_exhaustive_search(h in matrix(7, 8)) {
        let code = ClassicalCode::from_parity_check(h);
        let cert = is_robust(&code).unwrap();
        cert.verify(&code).unwrap();
        let oracle = find_simultaneous_bipuncture(code.generator(), code.parity_check(), code.k(), u64::MAX)
            .unwrap()
            .is_some();
        prop_assert_eq!(cert.is_robust(), oracle);
    }

    #[test]
    fn alist_round_trip(h in matrix(8, 8)) {
        let text = alist::write(&h);
        let back = alist::parse(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(alist::write(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn product_invariants(ha in matrix(5, 6), hb in matrix(5, 6)) {
        let (a, b) = (ClassicalCode::from_parity_check(ha), ClassicalCode::from_parity_check(hb));
        let code = product(&a, &b).unwrap();
        prop_assert!(code.hx().mul(&code.hz().transpose()).unwrap().is_zero());
        let n = code.n_qubits();
        let rank_k = n - f2::rank(code.hx()) - f2::rank(code.hz());
        prop_assert_eq!(rank_k, a.k() * b.k_transpose() + a.k_transpose() * b.k());
        let basis = logical_basis(&code).unwrap();
        basis.check(&code).unwrap();
    }

    #[test]
    fn taut_decomposition_recombines(ha in matrix(4, 6), hb in matrix(5, 4), seed in any::<u64>()) {
        let (a, b) = (ClassicalCode::from_parity_check(ha), ClassicalCode::from_parity_check(hb));
        let code = product(&a, &b).unwrap();
        prop_assume!(code.sector() == Sector::VerticalRestricted);
        let basis = logical_basis(&code).unwrap();
        let horizontal: Vec<usize> = (code.grid().vertical_len()..code.n_qubits()).collect();
        for (kind, logicals, stabs) in [
            (PauliKind::Z, &basis.lz, code.hz()),
            (PauliKind::X, &basis.lx, code.hx()),
        ] {
            // stabilizers with no horizontal support
            let vertical_stabs = f2::cokernel(&stabs.select_columns(&horizontal).unwrap()).mul(stabs).unwrap();
            let mut v = logicals.combine_rows(&bits(seed, 1, logicals.nrows())).unwrap();
            v.xor_assign(&vertical_stabs.combine_rows(&bits(seed, 2, vertical_stabs.nrows())).unwrap());
            let parts = decompose_taut(&code, &v, kind).unwrap();
            let mut sum = BitVec::zeros(code.n_qubits());
            for (i, p) in parts.iter().enumerate() {
                for q in &parts[i + 1..] {
                    prop_assert!(p.vector.and(&q.vector).is_zero());
                    prop_assert_ne!(p.line, q.line);
                }
                sum.xor_assign(&p.vector);
            }
            prop_assert!(code.css().is_trivial(kind, &sum.xor(&v)));
        }
    }
}

fn random_css(hx: BitMatrix, coeffs: Vec<u16>) -> CssCode {
    let ker = f2::kernel_basis(&hx);
    let rows = coeffs
        .iter()
        .map(|&c| {
            ker.combine_rows(&BitVec::from_bools(
                (0..ker.nrows()).map(|i| c >> i & 1 == 1),
            ))
            .unwrap()
        })
        .collect();
    let hz = BitMatrix::from_rows(rows, hx.ncols()).unwrap();
    CssCode::new(hx, hz).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// A region supports a nontrivial (possibly mixed) logical iff it supports a pure one.
    #[test]
    fn mixed_logicals_reduce_to_pure(hx in matrix(4, 10), coeffs in prop::collection::vec(any::<u16>(), 0..4), mask in any::<u16>()) {
        let code = random_css(hx, coeffs);
        let n = code.n_qubits();
        let region = QubitRegion::new((0..n).filter(|i| mask >> i & 1 == 1));
        let inside: Vec<BitVec> = vectors(region.len())
            .map(|local| {
                let mut v = BitVec::zeros(n);
                for (t, &q) in region.indices().iter().enumerate() {
                    v.set(q, local.get(t));
                }
                v
            })
            .collect();
        let flags = |kind| -> Vec<(bool, bool)> {
            inside.iter().map(|v| (code.is_logical(kind, v), code.is_trivial(kind, v))).collect()
        };
        let (xs, zs) = (flags(PauliKind::X), flags(PauliKind::Z));
        // (x, z) is a logical when both parts commute, nontrivial unless both parts are stabilizers
        let mixed = xs.iter().any(|&(xl, xt)| {
            zs.iter().any(|&(zl, zt)| xl && zl && !(xt && zt))
        });
        let cert = is_correctable(&code, &region);
        cert.verify(&code).unwrap();
        prop_assert_eq!(mixed, !cert.is_correctable());
    }

    #[test]
    fn correctability_is_monotone(hx in matrix(5, 12), coeffs in prop::collection::vec(any::<u16>(), 0..5), mask in any::<u16>(), sub in any::<u16>()) {
        let code = random_css(hx, coeffs);
        let n = code.n_qubits();
        let region = QubitRegion::new((0..n).filter(|i| mask >> i & 1 == 1));
        let subset = QubitRegion::new(region.indices().iter().copied().filter(|&i| sub >> i & 1 == 1));
        if is_correctable(&code, &region).is_correctable() {
            prop_assert!(is_correctable(&code, &subset).is_correctable());
        }
    }

    #[test]
    fn union_of_separated_regions(ha in matrix(4, 6), hb in matrix(6, 4), pick in any::<u64>()) {
        let (a, b) = (ClassicalCode::from_parity_check(ha), ClassicalCode::from_parity_check(hb));
        let code = product(&a, &b).unwrap();
        prop_assume!(code.horizontal_logicals() == 0);
        let g = *code.grid();
        // split rows and columns into two sides; α and β live on opposite sides
        let side = |i: usize| pick >> (i % 64) & 1 == 1;
        let alpha = QubitRegion::new((0..g.n_a).flat_map(|i| (0..g.m_b).map(move |j| (i, j)))
            .filter(|&(i, j)| side(i) && side(j + 17) && (pick >> ((i * 5 + j * 3 + 40) % 64)) & 1 == 1)
            .map(|(i, j)| g.vertical(i, j)));
        let beta = QubitRegion::new((0..g.n_a).flat_map(|i| (0..g.m_b).map(move |j| (i, j)))
            .filter(|&(i, j)| !side(i) && !side(j + 17))
            .map(|(i, j)| g.vertical(i, j)));
        prop_assert!(separation(&g, &alpha, &beta).unwrap().both());
        let union = is_correctable(code.css(), &alpha.union(&beta));
        if !union.is_correctable() {
            prop_assert!(
                !is_correctable(code.css(), &alpha).is_correctable()
                    || !is_correctable(code.css(), &beta).is_correctable()
            );
        }
    }
}
