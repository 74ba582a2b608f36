mod common;

use gridcover::*;

fn assert_valid(g: &Grid, c: &Cover) {
    let r = verify_cover(g, c);
    assert!(r.valid, "{g} k={}: min coverage {} at {:?}", c.k(), r.min_coverage, r.witness);
    let fam = enumerate_lines(g);
    assert!(c.entries().keys().all(|l| fam.contains(l)), "cover uses a line outside the family");
}

#[test]
fn wide_construction_attains_the_lower_bound_size() {
    for m in 2..=4usize {
        for k in 1..=4u64 {
            let n = ((k as usize - 1) * (m - 1) + 1).max(2);
            let g = rectangular_grid(n, m).unwrap();
            let c = construct_wide(&g, k).unwrap();
            assert_valid(&g, &c);
            assert_eq!(c.size(), k * (n as u64 - 1) + (m as u64 - 1));
        }
    }
    let narrow = rectangular_grid(3, 3).unwrap();
    assert!(matches!(construct_wide(&narrow, 3), Err(Error::HypothesisViolated(_))));
}

#[test]
fn biregular_construction_matches_the_fractional_optimum() {
    for (n, m, seed) in [(4usize, 3usize, 1u64), (5, 5, 2), (6, 3, 3), (2, 6, 4)] {
        let g = generic_grid(n, m, seed).unwrap();
        let k = biregular_unit(n, m);
        for mult in 1..=2 {
            let c = construct_biregular(&g, mult * k).unwrap();
            assert_valid(&g, &c);
            let phi = Rational::from(n as u64 - 1) + Rational::new(((m - 1) * (m - 1)) as i64, (n + m - 2) as i64);
            assert_eq!(Rational::from(c.size()), Rational::from(mult * k) * phi);
        }
    }
    let g = generic_grid(4, 3, 1).unwrap();
    assert!(matches!(construct_biregular(&g, 4), Err(Error::DivisibilityViolated { k: 4, required: 5 })));
}

#[test]
fn three_halves_construction_on_square_grids() {
    for n in 2..=6 {
        let g = generic_grid(n, n, 5).unwrap();
        for k in 1..=4u64 {
            let c = construct_square_threehalves(&g, k).unwrap();
            assert_valid(&g, &c);
            assert_eq!(c.size(), (2 * k.div_ceil(2) + k / 2) * (n as u64 - 1));
        }
    }
    assert!(matches!(construct_square_threehalves(&rectangular_grid(4, 3).unwrap(), 2), Err(Error::NotSquare { .. })));
}

#[test]
fn standard_construction_is_valid_and_within_its_bound() {
    for n in 2..=12u64 {
        let g = standard_grid(n as usize).unwrap();
        for k in [1, 2, 5, 8] {
            for t in 1..n {
                let c = construct_standard(n, k, Some(t)).unwrap();
                assert_valid(&g, &c);
                assert!(Rational::from(c.size()) <= standard_size_bound(n, k, t), "n={n} k={k} t={t}");
            }
        }
    }
    assert_eq!(construct_standard(5, 8, None).unwrap().size(), 49);
    assert!(construct_standard(5, 1, Some(0)).is_err());
    assert!(construct_standard(5, 1, Some(5)).is_err());
}

#[test]
fn verification_reports_an_undercovered_point() {
    let g = standard_grid(4).unwrap();
    let mut c = Cover::new(2);
    for (line, m) in construct_standard(4, 2, None).unwrap().entries().iter().skip(1) {
        c.add(line.clone(), *m);
    }
    let r = verify_cover(&g, &c);
    assert!(!r.valid);
    let p = r.witness.expect("witness for an invalid cover");
    assert!(r.min_coverage < 2);
    assert_eq!(c.coverage(&g)[g.index_of(&p.x, &p.y).unwrap()], r.min_coverage);
}
