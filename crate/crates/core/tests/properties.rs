use std::collections::BTreeSet;

use proptest::prelude::*;

use cyclesync::cluster::DistanceMatrix;
use cyclesync::ingest::{write_csv, yoy_growth};
use cyclesync::rmt::{self, symmetric_eigen};
use cyclesync::{agglomerate, ks_two_sample, parse_csv, synthetic, Panel, Quarter, QuarterlySeries};

fn panel_from(rows: Vec<Vec<f64>>) -> Panel {
    let labels = (0..rows.len()).map(|i| format!("R{i}")).collect();
    Panel::new(labels, Quarter::from_index(8000), rows).unwrap()
}

fn rows_strategy(max_n: usize, max_t: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2..=max_n, 8..=max_t).prop_flat_map(|(n, t)| prop::collection::vec(prop::collection::vec(-10.0..10.0f64, t), n))
}

fn distance_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0.0..5.0f64, n * (n - 1) / 2).prop_map(move |upper| {
            let mut d = vec![0.0; n * n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    d[i * n + j] = upper[k];
                    d[j * n + i] = upper[k];
                    k += 1;
                }
            }
            (n, d)
        })
    })
}

fn clusters(tree: &cyclesync::Dendrogram) -> Vec<(Vec<String>, f64)> {
    let mut out: Vec<(Vec<String>, f64)> = cyclesync::merge_order(tree)
        .into_iter()
        .map(|s| {
            let mut m = s.members;
            m.sort();
            (m, s.height)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quarter_display_round_trips(index in 0i64..40_000) {
        let q = Quarter::from_index(index);
        let back: Quarter = q.to_string().parse().unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn yoy_growth_ignores_units(levels in prop::collection::vec(1.0..1e4f64, 5..60), factor in 1e-3..1e3f64) {
        let s = QuarterlySeries::new("X", Quarter::from_index(7920), levels).unwrap();
        let a = yoy_growth(&s).unwrap();
        let b = yoy_growth(&s.scaled(factor)).unwrap();
        prop_assert_eq!(a.start(), b.start());
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn csv_write_then_parse_is_identity(
        spans in prop::collection::vec((0i64..12, prop::collection::vec(-1e6..1e6f64, 1..20)), 1..5)
    ) {
        let series: Vec<QuarterlySeries> = spans
            .into_iter()
            .enumerate()
            .map(|(i, (offset, values))| QuarterlySeries::new(format!("S{i}"), Quarter::from_index(7900 + offset), values).unwrap())
            .collect();
        let text = write_csv(&series);
        prop_assert_eq!(parse_csv(&text).unwrap(), series);
    }

    #[test]
    fn standardized_rows_have_zero_mean_unit_variance(rows in rows_strategy(6, 60)) {
        let z = panel_from(rows).standardize().unwrap();
        for row in z.rows() {
            let t = row.len() as f64;
            let mean = row.iter().sum::<f64>() / t;
            let var = row.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / t;
            prop_assert!(mean.abs() < 1e-12);
            prop_assert!((var - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ks_is_symmetric_and_rank_based(
        a in prop::collection::vec(-40i32..40, 1..30),
        b in prop::collection::vec(-40i32..40, 1..30),
    ) {
        let a: Vec<f64> = a.into_iter().map(|v| v as f64 / 4.0).collect();
        let b: Vec<f64> = b.into_iter().map(|v| v as f64 / 4.0).collect();
        let ab = ks_two_sample(&a, &b).unwrap();
        let ba = ks_two_sample(&b, &a).unwrap();
        prop_assert_eq!(ab.d_statistic, ba.d_statistic);
        prop_assert_eq!(ab.p_value, ba.p_value);
        let up = |x: &f64| x * x * x + 2.0 * x;
        let ta: Vec<f64> = a.iter().map(up).collect();
        let tb: Vec<f64> = b.iter().map(up).collect();
        prop_assert_eq!(ks_two_sample(&ta, &tb).unwrap().d_statistic, ab.d_statistic);
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
    }

    #[test]
    fn market_fraction_ignores_row_order(rows in rows_strategy(8, 60), seed in any::<u64>()) {
        let panel = panel_from(rows).standardize().unwrap();
        let mut order: Vec<String> = panel.labels().to_vec();
        let k = (seed % order.len() as u64) as usize;
        order.rotate_left(k);
        let last = order.len() - 1;
        order.swap(0, last);
        let permuted = panel.select(&order).unwrap();
        let a = rmt::eigen(&rmt::correlation(&panel).unwrap()).unwrap();
        let b = rmt::eigen(&rmt::correlation(&permuted).unwrap()).unwrap();
        prop_assert!((rmt::market_fraction(&a) - rmt::market_fraction(&b)).abs() < 1e-12);
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn ipr_lies_between_inverse_n_and_one(rows in rows_strategy(10, 40)) {
        let panel = panel_from(rows).standardize().unwrap();
        let eig = rmt::eigen(&rmt::correlation(&panel).unwrap()).unwrap();
        let n = panel.n() as f64;
        for v in eig.eigenvectors() {
            let ipr = rmt::ipr(v).unwrap();
            prop_assert!(ipr >= 1.0 / n - 1e-12 && ipr <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn upgma_heights_never_decrease((n, d) in distance_strategy(9)) {
        let labels: Vec<String> = (0..n).map(|i| format!("L{i}")).collect();
        let tree = agglomerate(&DistanceMatrix::new(n, d).unwrap(), &labels).unwrap();
        prop_assert!(tree.is_well_formed());
        for w in tree.merges().windows(2) {
            prop_assert!(w[1].height >= w[0].height - 1e-12);
        }
        prop_assert_eq!(tree.merges().last().unwrap().size, n);
    }

    #[test]
    fn upgma_commutes_with_relabelling((n, d) in distance_strategy(8), shift in 0usize..8) {
        let labels: Vec<String> = (0..n).map(|i| format!("L{i}")).collect();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).rev().collect();
        let mut pd = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                pd[i * n + j] = d[perm[i] * n + perm[j]];
            }
        }
        let plabels: Vec<String> = perm.iter().map(|&i| labels[i].clone()).collect();
        let a = clusters(&agglomerate(&DistanceMatrix::new(n, d).unwrap(), &labels).unwrap());
        let b = clusters(&agglomerate(&DistanceMatrix::new(n, pd).unwrap(), &plabels).unwrap());
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(&x.0, &y.0);
            prop_assert!((x.1 - y.1).abs() < 1e-12);
        }
    }

    #[test]
    fn two_blocks_split_at_the_root(a in 2usize..5, b in 2usize..5, seed in any::<u64>()) {
        let panel = synthetic::block_panel(&[a, b], 0.8, 200, seed).standardize().unwrap();
        let corr = rmt::correlation(&panel).unwrap();
        let tree = agglomerate(&cyclesync::cluster::dissimilarity_rows(&corr), panel.labels()).unwrap();
        let root = tree.merges().last().unwrap();
        let left: BTreeSet<usize> = tree.members(root.left).into_iter().collect();
        let right: BTreeSet<usize> = tree.members(root.right).into_iter().collect();
        let first: BTreeSet<usize> = (0..a).collect();
        let second: BTreeSet<usize> = (a..a + b).collect();
        prop_assert!((left == first && right == second) || (left == second && right == first));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigen_reconstructs_symmetric_matrices(n in 1usize..=50, seed in any::<u64>()) {
        let mut src = cyclesync::random::NormalSource::new(seed);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = src.standard_normal();
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let (values, vectors) = symmetric_eigen(n, &a).unwrap();
        for w in values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        let scale = a.iter().fold(1.0_f64, |m, x| m.max(x.abs())) * n as f64;
        for i in 0..n {
            for j in 0..n {
                let recon: f64 = (0..n).map(|k| values[k] * vectors[k][i] * vectors[k][j]).sum();
                prop_assert!((recon - a[i * n + j]).abs() < 1e-12 * scale);
                let dot: f64 = (0..n).map(|k| vectors[i][k] * vectors[j][k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - expected).abs() < 1e-12 * n as f64);
            }
        }
    }
}
