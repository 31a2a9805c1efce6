use normsurf::census::{standard_suite, CensusCase};
use normsurf::linalg::rank;
use normsurf::oracle::{brute_force_rays, support_enumeration_rays, RAY_DIM_LIMIT};
use normsurf::vertex_enum::{enumerate_admissible_rays, enumerate_rays, sort_rows_position};
use normsurf::*;

fn setup(case: &CensusCase) -> (DenseMatrix, Admissibility) {
    let tri = &case.triangulation;
    (matching_matrix(tri).to_dense(), Admissibility::quadrilateral(tri.size()))
}

#[test]
fn rays_match_support_enumeration() {
    for case in standard_suite() {
        let (a, adm) = setup(&case);
        let rays = enumerate_admissible_rays(&a, &adm);
        assert_eq!(rays, support_enumeration_rays(&a, &adm).unwrap(), "{}", case.name);
        if a.cols() <= RAY_DIM_LIMIT {
            assert_eq!(rays, brute_force_rays(&a, &adm).unwrap(), "{}", case.name);
        }
    }
}

#[test]
fn every_ray_is_extremal_and_admissible() {
    for case in standard_suite() {
        let (a, adm) = setup(&case);
        for (ray, zeros) in enumerate_admissible_rays(&a, &adm).iter() {
            assert!(ray.is_nonnegative() && !ray.is_zero());
            assert_eq!(ray.gcd(), BigInt::from(1), "{}: {ray} is not primitive", case.name);
            assert!(a.annihilates(ray).unwrap());
            assert!(adm.is_admissible_vector(ray));
            // the columns on the support have a one-dimensional kernel
            let support: Vec<usize> = (0..a.cols()).filter(|k| !zeros.contains(*k)).collect();
            let sub: Vec<Vec<BigInt>> =
                a.rows().iter().map(|r| support.iter().map(|&k| r[k].clone()).collect()).collect();
            assert_eq!(support.len() - rank(sub), 1, "{}: {ray} is not extremal", case.name);
        }
    }
}

#[test]
fn figure_eight_vertex_count() {
    let tri = parse_triangulation(fixtures::FIGURE_EIGHT).unwrap();
    let rays = vertex_surfaces(&tri);
    // only the vertex link: two copies of each triangle type
    assert_eq!(rays.len(), 1);
    assert_eq!(rays.rays()[0], NormalVector::from_i64(&[1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0]));
}

#[test]
fn row_order_does_not_change_rays() {
    for case in standard_suite().into_iter().take(20) {
        let (a, adm) = setup(&case);
        let expected = enumerate_admissible_rays(&a, &adm);
        let mut reversed: Vec<usize> = sort_rows_position(&a);
        reversed.reverse();
        let shuffled = a.permuted(&reversed);
        let got = enumerate_rays(&shuffled, Some(&adm), &Deadline::none()).unwrap();
        assert_eq!(got, expected, "{}", case.name);
    }
}

#[test]
fn machine_integers_agree_with_bigint() {
    for case in standard_suite() {
        let (a, adm) = setup(&case);
        let small: normsurf::cone::DenseMatrix<i64> = matching_matrix(&case.triangulation).to_dense();
        let big = enumerate_admissible_rays(&a, &adm);
        let machine = enumerate_admissible_rays(&small, &adm);
        let converted: Vec<NormalVector> = machine.rays().iter().map(|r| r.convert().unwrap()).collect();
        assert_eq!(big.rays(), &converted[..], "{}", case.name);
    }
}
