//! Two-way translations between group-side and lattice-side objects.
//!
//! A B_h set maps to a simplex packing through the kernel lattice of its
//! elements, and a packing maps back through the quotient projection;
//! h-bases and coverings mirror the same pair. `discretize_lattice` rounds a
//! rational basis onto the `1/h` grid and reports what the rounded lattice
//! does to a slightly shrunken simplex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{group_from_lattice, AbelianGroup, GroupElement};
use crate::lattice::{hnf, Lattice};
use crate::matrix::IntMatrix;
use crate::rational::Rat;
use crate::shapes::ShapeSpec;
use crate::snf::left_kernel;
use crate::verify::{
    classify_arrangement, is_bh_set, is_h_basis, ArrangementVerdict, BasisVerdict, BhVerdict,
};

/// The lattice `{ x : sum_i x_i * elems_i = 0 }`.
///
/// Fails with `NotGenerating` when the elements do not generate the group,
/// i.e. when the quotient `Z^n / L` realizes a proper subgroup.
pub fn kernel_lattice(group: &AbelianGroup, elems: &[GroupElement]) -> Result<Lattice> {
    let n = elems.len();
    for e in elems {
        if !group.contains(e) {
            return Err(Error::ElementNotInGroup { expected: group.rank(), got: e.coords().len() });
        }
    }
    let k = group.rank();
    let lattice = if k == 0 {
        Lattice::identity(n)
    } else {
        // Stack element coordinates over the diagonal relation matrix; the
        // left kernel of the stack, restricted to its first n coordinates,
        // generates exactly the solution lattice.
        let mut stacked = IntMatrix::zero(n + k, k);
        for (i, e) in elems.iter().enumerate() {
            for j in 0..k {
                stacked[(i, j)] = e.coords()[j];
            }
        }
        for j in 0..k {
            stacked[(n + j, j)] = group.factors()[j];
        }
        let kernel = left_kernel(&stacked)?;
        debug_assert_eq!(kernel.rows(), n);
        let rows = (0..kernel.rows()).map(|i| kernel.row(i)[..n].to_vec()).collect();
        hnf(&IntMatrix::from_rows(rows)?)?
    };
    let det = lattice.det()?;
    let order = group.order()?;
    if det != order {
        return Err(Error::NotGenerating { subgroup: det, order });
    }
    Ok(lattice)
}

/// Set extracted from a lattice quotient: zero plus the images of the
/// standard basis vectors, duplicates dropped. `requested_cardinality` is
/// `n + 1`; `set.len()` can be smaller when images coincide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhFromPacking {
    pub group: AbelianGroup,
    pub set: Vec<GroupElement>,
    pub requested_cardinality: usize,
    pub verdict: BhVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFromCovering {
    pub group: AbelianGroup,
    pub set: Vec<GroupElement>,
    pub requested_cardinality: usize,
    pub verdict: BasisVerdict,
}

fn translated_tail(group: &AbelianGroup, set: &[GroupElement]) -> Result<Vec<GroupElement>> {
    set[1..].iter().map(|e| group.sub(e, &set[0])).collect()
}

fn projection_set(lattice: &Lattice) -> Result<(AbelianGroup, Vec<GroupElement>, usize)> {
    let (group, proj) = group_from_lattice(lattice)?;
    let mut set = vec![group.zero()];
    for i in 0..lattice.n() {
        let img = proj.image_of_basis(i).clone();
        if !set.contains(&img) {
            set.push(img);
        }
    }
    Ok((group, set, lattice.n() + 1))
}

/// B_h set -> simplex packing. Verifies the set first; the returned verdict
/// classifies `simplex(n, h)` against the kernel lattice.
pub fn bh_to_packing(
    group: &AbelianGroup,
    set: &[GroupElement],
    h: u32,
) -> Result<(Lattice, ArrangementVerdict)> {
    let check = is_bh_set(group, set, h)?;
    if !check.is_bh_set {
        return Err(Error::NotABhSet(check.witness.expect("negative verdict has witness")));
    }
    let elems = translated_tail(group, set)?;
    let lattice = kernel_lattice(group, &elems)?;
    let shape = ShapeSpec::simplex(elems.len(), h)?;
    let verdict = classify_arrangement(&shape.points(), &lattice)?;
    Ok((lattice, verdict))
}

/// Simplex packing -> B_h set in the quotient group.
pub fn packing_to_bh(lattice: &Lattice, h: u32) -> Result<BhFromPacking> {
    let shape = ShapeSpec::simplex(lattice.n(), h)?;
    let arrangement = classify_arrangement(&shape.points(), lattice)?;
    if !arrangement.class.is_packing() {
        return Err(Error::NotAPacking(arrangement.collision.expect("collision present")));
    }
    let (group, set, requested) = projection_set(lattice)?;
    let verdict = is_bh_set(&group, &set, h)?;
    Ok(BhFromPacking { group, set, requested_cardinality: requested, verdict })
}

/// h-basis -> simplex covering via the kernel lattice.
pub fn basis_to_covering(
    group: &AbelianGroup,
    set: &[GroupElement],
    h: u32,
) -> Result<(Lattice, ArrangementVerdict)> {
    let check = is_h_basis(group, set, h)?;
    if !check.is_basis {
        return Err(Error::NotAnHBasis(check.witness.expect("negative verdict has witness")));
    }
    let elems = translated_tail(group, set)?;
    let lattice = kernel_lattice(group, &elems)?;
    let shape = ShapeSpec::simplex(elems.len(), h)?;
    let verdict = classify_arrangement(&shape.points(), &lattice)?;
    Ok((lattice, verdict))
}

/// Simplex covering -> h-basis in the quotient group. The extracted set may
/// have fewer than `n + 1` elements when basis-vector images coincide.
pub fn covering_to_basis(lattice: &Lattice, h: u32) -> Result<BasisFromCovering> {
    let shape = ShapeSpec::simplex(lattice.n(), h)?;
    let arrangement = classify_arrangement(&shape.points(), lattice)?;
    if !arrangement.class.is_covering() {
        return Err(Error::NotACovering(arrangement.uncovered.expect("gap present")));
    }
    let (group, set, requested) = projection_set(lattice)?;
    let verdict = is_h_basis(&group, &set, h)?;
    Ok(BasisFromCovering { group, set, requested_cardinality: requested, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discretization {
    pub lattice: Lattice,
    pub shape: ShapeSpec,
    pub verdict: ArrangementVerdict,
    pub density: Rat,
}

fn rational_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][k].is_zero());
        let Some(p) = pivot else {
            return Rat::zero();
        };
        if p != k {
            a.swap(k, p);
            det = -&det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].clone();
        for i in k + 1..n {
            let factor = &a[i][k] / &inv;
            for j in k..n {
                a[i][j] = &a[i][j] - &(&factor * &a[k][j]);
            }
        }
    }
    det
}

/// Round each entry of a rational basis to the nearest multiple of `1/h`
/// (ties upward), scale by `h` to an integer lattice, and classify the
/// shrunken simplex `simplex(n, floor(h*(1-eps)))` against it.
pub fn discretize_lattice(basis: &[Vec<Rat>], h: u32, eps: &Rat) -> Result<Discretization> {
    let n = basis.len();
    if n == 0 || basis.iter().any(|r| r.len() != n) {
        return Err(Error::NonSquare { rows: n, cols: basis.first().map_or(0, Vec::len) });
    }
    if h == 0 {
        return Err(Error::UnsupportedParameters("h must be >= 1".into()));
    }
    if eps.is_negative() || !crate::rational::lt(eps, &Rat::one()) {
        return Err(Error::UnsupportedParameters(format!("eps must lie in [0,1), got {eps}")));
    }
    if rational_det(basis).is_zero() {
        return Err(Error::SingularBasis);
    }

    let hr = Rat::int(h as i128);
    let mut rows = Vec::with_capacity(n);
    for r in basis {
        let mut row = Vec::with_capacity(n);
        for v in r {
            let scaled = (&hr * v).round_half_up();
            row.push(num_traits::ToPrimitive::to_i128(&scaled).ok_or(Error::Overflow)?);
        }
        rows.push(row);
    }
    let m = IntMatrix::from_rows(rows)?;
    if m.det()? == 0 {
        return Err(Error::DegenerateRounding);
    }
    let lattice = hnf(&m)?;

    let shrunk = (&(&Rat::one() - eps) * &hr).floor_i128()?;
    let shape = ShapeSpec::simplex(n, shrunk as u32)?;
    let points = shape.points();
    let verdict = classify_arrangement(&points, &lattice)?;
    let density = Rat::frac(points.len() as i128, lattice.det()?)?;
    Ok(Discretization { lattice, shape, verdict, density })
}

/// Smallest `h <= h_max` whose discretization of `basis` yields a packing,
/// together with that discretization. There is no constructive handle on
/// how large h must get for a given margin, so this reports only what it
/// finds below the cap and claims nothing beyond it.
pub fn smallest_packing_height(
    basis: &[Vec<Rat>],
    eps: &Rat,
    h_max: u32,
) -> Result<Option<(u32, Discretization)>> {
    for h in 1..=h_max {
        match discretize_lattice(basis, h, eps) {
            Ok(d) if d.verdict.class.is_packing() => return Ok(Some((h, d))),
            Ok(_) => {}
            // Rounding can collapse the basis at coarse grids and recover
            // at finer ones.
            Err(Error::DegenerateRounding) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::ArrangementClass;

    fn z(m: i128) -> AbelianGroup {
        AbelianGroup::cyclic(m).unwrap()
    }

    fn els(g: &AbelianGroup, vals: &[i128]) -> Vec<GroupElement> {
        vals.iter().map(|&v| g.reduce(&[v]).unwrap()).collect()
    }

    #[test]
    fn kernel_lattice_examples() {
        let g = z(7);
        let l = kernel_lattice(&g, &els(&g, &[1, 3])).unwrap();
        assert_eq!(l.basis().to_rows(), vec![vec![7, 0], vec![4, 1]]);

        let l = kernel_lattice(&AbelianGroup::trivial(), &[
            AbelianGroup::trivial().zero(),
            AbelianGroup::trivial().zero(),
        ])
        .unwrap();
        assert_eq!(l, Lattice::identity(2));

        let g22 = AbelianGroup::new(vec![2, 2]).unwrap();
        let e1 = g22.reduce(&[1, 0]).unwrap();
        let e2 = g22.reduce(&[0, 1]).unwrap();
        let l = kernel_lattice(&g22, &[e1, e2]).unwrap();
        assert_eq!(l.basis().to_rows(), vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn kernel_lattice_characterizes_zero_sums() {
        let g = z(7);
        let elems = els(&g, &[1, 3]);
        let l = kernel_lattice(&g, &elems).unwrap();
        for x in -7i128..7 {
            for y in -7i128..7 {
                let combo = crate::group::element_combine(&g, &[x, y], &elems).unwrap();
                assert_eq!(l.contains(&[x, y]).unwrap(), combo.is_zero());
            }
        }
    }

    #[test]
    fn kernel_lattice_detects_non_generating() {
        let g = z(8);
        let res = kernel_lattice(&g, &els(&g, &[2]));
        assert_eq!(res, Err(Error::NotGenerating { subgroup: 4, order: 8 }));
    }

    #[test]
    fn bh_packing_roundtrip() {
        let g = z(7);
        let (l, verdict) = bh_to_packing(&g, &els(&g, &[0, 1, 3]), 2).unwrap();
        assert_eq!(l.basis().to_rows(), vec![vec![7, 0], vec![4, 1]]);
        assert_eq!(verdict.class, ArrangementClass::PackingOnly);
        assert_eq!(verdict.det, 7);

        let back = packing_to_bh(&l, 2).unwrap();
        assert_eq!(back.group.order().unwrap(), 7);
        assert_eq!(back.set.len(), 3);
        assert!(back.verdict.is_bh_set);
    }

    #[test]
    fn one_dimensional_tiling() {
        for h in 1..=5u32 {
            let g = z(h as i128 + 1);
            let (l, verdict) = bh_to_packing(&g, &els(&g, &[0, 1]), h).unwrap();
            assert_eq!(l.det().unwrap(), h as i128 + 1);
            assert_eq!(verdict.class, ArrangementClass::Tiling);
        }
    }

    #[test]
    fn larger_bh_example() {
        let g = z(19);
        let (l, verdict) = bh_to_packing(&g, &els(&g, &[0, 1, 8]), 4).unwrap();
        assert_eq!(l.det().unwrap(), 19);
        assert!(verdict.class.is_packing());
    }

    #[test]
    fn bh_to_packing_rejects_non_bh() {
        let g = z(7);
        assert!(matches!(
            bh_to_packing(&g, &els(&g, &[0, 1, 2]), 2),
            Err(Error::NotABhSet(_))
        ));
    }

    #[test]
    fn any_three_elements_are_b1() {
        let l = hnf(&IntMatrix::from_rows(vec![vec![3, 0], vec![0, 3]]).unwrap()).unwrap();
        let res = packing_to_bh(&l, 1).unwrap();
        assert_eq!(res.group.factors(), &[3, 3]);
        assert_eq!(res.set.len(), 3);
        assert!(res.verdict.is_bh_set);
    }

    #[test]
    fn basis_covering_roundtrip() {
        let g = z(3);
        let (l, verdict) = basis_to_covering(&g, &els(&g, &[0, 1]), 2).unwrap();
        assert_eq!(l.det().unwrap(), 3);
        assert_eq!(verdict.class, ArrangementClass::Tiling);

        let g = z(7);
        let (l, verdict) = basis_to_covering(&g, &els(&g, &[0, 1, 3, 5]), 2).unwrap();
        assert_eq!(l.det().unwrap(), 7);
        assert!(verdict.class.is_covering());
        let back = covering_to_basis(&l, 2).unwrap();
        assert_eq!(back.group.order().unwrap(), 7);
        assert!(back.verdict.is_basis);
    }

    #[test]
    fn covering_fails_with_witness() {
        let l = hnf(&IntMatrix::from_rows(vec![vec![7, 0], vec![4, 1]]).unwrap()).unwrap();
        match covering_to_basis(&l, 2) {
            Err(Error::NotACovering(gap)) => {
                // The simplex hits 6 of 7 cosets; the reported gap is a
                // canonical representative no point reaches.
                let shape = ShapeSpec::simplex(2, 2).unwrap().points();
                for p in shape.points() {
                    assert_ne!(l.coset_reduce(p).unwrap(), gap);
                }
            }
            other => panic!("expected NotACovering, got {other:?}"),
        }
    }

    #[test]
    fn discretize_identity_with_margin() {
        let basis = vec![
            vec![Rat::int(1), Rat::int(0)],
            vec![Rat::int(0), Rat::int(1)],
        ];
        let d = discretize_lattice(&basis, 3, &Rat::frac(1, 3).unwrap()).unwrap();
        assert_eq!(d.lattice.basis().to_rows(), vec![vec![3, 0], vec![0, 3]]);
        assert_eq!(d.shape, ShapeSpec::simplex(2, 2).unwrap());
        assert!(d.verdict.class.is_packing());
        assert_eq!(d.density, Rat::frac(2, 3).unwrap());
    }

    #[test]
    fn discretize_without_margin_fails_to_pack() {
        let basis = vec![
            vec![Rat::int(1), Rat::int(0)],
            vec![Rat::int(0), Rat::int(1)],
        ];
        let d = discretize_lattice(&basis, 3, &Rat::zero()).unwrap();
        assert_eq!(d.shape, ShapeSpec::simplex(2, 3).unwrap());
        assert!(!d.verdict.class.is_packing());
    }

    #[test]
    fn discretize_recovers_integer_lattice() {
        let basis = vec![
            vec![Rat::frac(7, 4).unwrap(), Rat::int(0)],
            vec![Rat::int(1), Rat::frac(1, 4).unwrap()],
        ];
        let d = discretize_lattice(&basis, 4, &Rat::zero()).unwrap();
        assert_eq!(d.lattice.basis().to_rows(), vec![vec![7, 0], vec![4, 1]]);
        assert!(!d.verdict.class.is_packing());
    }

    #[test]
    fn scan_finds_first_packing_height() {
        // Quarter-scaled kernel basis of the extremal plane packing for
        // sidelength 4. The h=1 grid collapses the second row to zero
        // (skipped as degenerate), h=2 rounds to a determinant-10 lattice
        // that already packs the 6-point simplex, and h=4 would recover
        // the determinant-19 lattice exactly.
        let basis = vec![
            vec![Rat::frac(19, 4).unwrap(), Rat::int(0)],
            vec![Rat::int(-2), Rat::frac(1, 4).unwrap()],
        ];
        let (h, d) = smallest_packing_height(&basis, &Rat::zero(), 8).unwrap().unwrap();
        assert_eq!(h, 2);
        assert_eq!(d.lattice.det().unwrap(), 10);
        assert_eq!(d.density, Rat::frac(3, 5).unwrap());

        // A cap below the first packing height reports nothing.
        assert_eq!(smallest_packing_height(&basis, &Rat::zero(), 1).unwrap(), None);

        let exact = discretize_lattice(&basis, 4, &Rat::zero()).unwrap();
        assert_eq!(exact.lattice.det().unwrap(), 19);
        assert!(exact.verdict.class.is_packing());

        // An unscaled identity never packs a nonempty simplex.
        let identity = vec![
            vec![Rat::int(1), Rat::int(0)],
            vec![Rat::int(0), Rat::int(1)],
        ];
        assert_eq!(smallest_packing_height(&identity, &Rat::zero(), 6).unwrap(), None);
    }

    #[test]
    fn discretize_rejects_bad_input() {
        let singular = vec![
            vec![Rat::int(1), Rat::int(1)],
            vec![Rat::int(1), Rat::int(1)],
        ];
        assert_eq!(discretize_lattice(&singular, 3, &Rat::zero()), Err(Error::SingularBasis));

        let tiny = vec![
            vec![Rat::frac(1, 100).unwrap(), Rat::int(0)],
            vec![Rat::int(0), Rat::frac(1, 100).unwrap()],
        ];
        assert_eq!(discretize_lattice(&tiny, 2, &Rat::zero()), Err(Error::DegenerateRounding));
        assert!(matches!(
            discretize_lattice(&tiny, 2, &Rat::int(1)),
            Err(Error::UnsupportedParameters(_))
        ));
    }
}
