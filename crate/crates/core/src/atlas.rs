//! Built-in catalogue of small named groups with the primes worth testing.

use crate::constructions::{
    affine_group, affine_matrix_group, alternating, cyclic, dihedral, direct_product,
    elementary_abelian, generalized_quaternion, matrix_group, semidirect_product, symmetric,
    ActionSpec, Matrix,
};
use crate::error::Result;
use crate::group::{make_group, Group};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub group: Group,
    pub tags: Vec<String>,
    /// Primes of particular interest for this group.
    pub primes: Vec<u64>,
}

impl AtlasEntry {
    fn new(group: Group, tags: &[&str], primes: &[u64]) -> Self {
        Self {
            group,
            tags: tags.iter().map(|t| t.to_string()).collect(),
            primes: primes.to_vec(),
        }
    }

    pub fn name(&self) -> &str {
        self.group.name()
    }
}

fn m(rows: [[usize; 2]; 2]) -> Matrix {
    rows.iter().map(|r| r.to_vec()).collect()
}

/// Quaternion generators `i, j` in SL(2,5).
fn q8_mod5() -> Vec<Matrix> {
    vec![m([[0, 1], [4, 0]]), m([[2, 0], [0, 3]])]
}

/// An element of order 3 in SL(2,5) normalising the quaternion group above.
fn order3_mod5() -> Matrix {
    m([[3, 2], [1, 1]])
}

/// Quaternion generators in SL(2,3).
fn q8_mod3() -> Vec<Matrix> {
    vec![m([[0, 1], [2, 0]]), m([[1, 1], [1, 2]])]
}

/// Images of the basis generators of `E_{p^2}` under `v -> vM`.
fn linear_action(k: &Group, mats: &[Matrix]) -> ActionSpec {
    let (x, y) = (&k.generators()[0], &k.generators()[1]);
    let word = |row: &[usize]| x.pow(row[0] as u64).then(&y.pow(row[1] as u64));
    ActionSpec {
        images: mats
            .iter()
            .map(|mat| vec![word(&mat[0]), word(&mat[1])])
            .collect(),
    }
}

fn e25_by(mats: &[Matrix], name: &str) -> Result<Group> {
    let k = elementary_abelian(5, 2)?;
    let h = matrix_group(5, mats, &format!("{name}-top"))?;
    semidirect_product(&k, &h, &linear_action(&k, mats), name)
}

/// `(C5 x C5) ⋊ Q8` with `Q8` acting regularly on the nonzero vectors.
pub fn c5c5_q8() -> Result<Group> {
    e25_by(&q8_mod5(), "(C5xC5):Q8")
}

/// `(C5 x C5) ⋊ SL(2,3)`, transitive on the nonzero vectors.
pub fn c5c5_sl23() -> Result<Group> {
    let mut mats = q8_mod5();
    mats.push(order3_mod5());
    e25_by(&mats, "(C5xC5):SL(2,3)")
}

/// `E25 ⋊ Σ3`: the transposition fixes `x` and sends `y` to `x^4 y^4`, the
/// 3-cycle permutes the nonzero vectors in orbits of length 3.
pub fn e25_sigma3() -> Result<Group> {
    let k = elementary_abelian(5, 2)?;
    let h = symmetric(3)?;
    // generators of Sigma3 are (1,2) and (1,2,3), in that order
    let mats = [m([[1, 0], [4, 4]]), m([[0, 1], [4, 4]])];
    semidirect_product(&k, &h, &linear_action(&k, &mats), "E25:Sigma3")
}

/// Extraspecial group of order 27 and exponent 3, regular on 27 points.
///
/// Elements are `(v, c)` with `v` in `F_3^2`, multiplied by
/// `(v, c)(w, d) = (v + w, c + d + 2 det(v, w))`.
pub fn extraspecial_27() -> Result<Group> {
    heisenberg().map(|(g, _)| g)
}

fn heisenberg() -> Result<(Group, impl Fn([usize; 3]) -> Permutation)> {
    let idx = |e: [usize; 3]| e[0] + 3 * e[1] + 9 * e[2];
    let elem = |i: usize| [i % 3, (i / 3) % 3, i / 9];
    let mul = move |a: [usize; 3], b: [usize; 3]| {
        let det = (a[0] * b[1] + 3 * 3 - (a[1] * b[0]) % 3) % 3;
        [(a[0] + b[0]) % 3, (a[1] + b[1]) % 3, (a[2] + b[2] + 2 * det) % 3]
    };
    let right_mult = move |g: [usize; 3]| {
        Permutation::from_images((0..27).map(|i| idx(mul(elem(i), g))).collect())
            .expect("right multiplication is a bijection")
    };
    let group = make_group(27, &[right_mult([1, 0, 0]), right_mult([0, 1, 0])], "3^(1+2)")?;
    Ok((group, right_mult))
}

/// Extraspecial group of order 27 extended by a quaternion group of
/// automorphisms acting trivially on the center.
pub fn extraspecial_27_q8() -> Result<Group> {
    let (k, elem) = heisenberg()?;
    let mats = q8_mod3();
    let h = matrix_group(3, &mats, "Q8")?;
    let action = ActionSpec {
        images: mats
            .iter()
            .map(|mat| {
                vec![
                    elem([mat[0][0], mat[0][1], 0]),
                    elem([mat[1][0], mat[1][1], 0]),
                ]
            })
            .collect(),
    };
    semidirect_product(&k, &h, &action, "3^(1+2):Q8")
}

/// `Q8 ⋊ C9` with `C9` acting through an automorphism of order 3.
pub fn q8_c9() -> Result<Group> {
    let q8 = generalized_quaternion(8)?;
    let c9 = cyclic(9)?;
    let (a, b) = (&q8.generators()[0], &q8.generators()[1]);
    let action = ActionSpec {
        images: vec![vec![b.clone(), a.then(b)]],
    };
    semidirect_product(&q8, &c9, &action, "Q8:C9")
}

fn cyclic_by_cyclic(n: usize, m: usize, power: u64, name: &str) -> Result<Group> {
    let k = cyclic(n)?;
    let h = cyclic(m)?;
    let image = k.generators()[0].pow(power);
    semidirect_product(&k, &h, &ActionSpec { images: vec![vec![image]] }, name)
}

/// All built-in groups, in a fixed order.
/// `E9 ⋊ Q8` with Q8 acting regularly on the nonzero vectors of `F_3^2`.
pub fn e9_q8() -> Result<Group> {
    affine_matrix_group(3, &q8_mod3(), "E9:Q8")
}

pub fn builtin_atlas() -> Vec<AtlasEntry> {
    build_atlas().expect("built-in groups are well formed")
}

/// Looks a group up by name.
pub fn atlas_group(name: &str) -> Option<AtlasEntry> {
    builtin_atlas().into_iter().find(|e| e.name() == name)
}

fn build_atlas() -> Result<Vec<AtlasEntry>> {
    let order12_tag = ["ordinary-triangle-free", "order-12"];
    let c2 = cyclic(2)?;
    Ok(vec![
        AtlasEntry::new(symmetric(3)?.with_name("Sigma3"), &["ordinary-triangle-free"], &[5]),
        AtlasEntry::new(dihedral(10)?, &["ordinary-triangle-free"], &[3]),
        AtlasEntry::new(alternating(4)?, &order12_tag, &[5]),
        AtlasEntry::new(dihedral(12)?, &order12_tag, &[5]),
        AtlasEntry::new(cyclic_by_cyclic(3, 4, 2, "C3:C4")?, &order12_tag, &[5]),
        AtlasEntry::new(cyclic_by_cyclic(7, 3, 2, "C7:C3")?, &["ordinary-triangle-free"], &[2]),
        AtlasEntry::new(symmetric(4)?.with_name("Sigma4"), &["ordinary-triangle"], &[3]),
        AtlasEntry::new(generalized_quaternion(8)?, &["two-group"], &[3]),
        AtlasEntry::new(cyclic_by_cyclic(7, 6, 3, "C7:C6")?, &["shape-b", "even-prime"], &[2]),
        AtlasEntry::new(
            affine_group(8, 7, true, "GammaL(1,8)")?,
            &["semilinear", "complement-graph-differs"],
            &[7],
        ),
        AtlasEntry::new(e25_sigma3()?, &["shape-a-converse"], &[5]),
        AtlasEntry::new(direct_product(&c2, &q8_c9()?)?.with_name("C2x(Q8:C9)"), &["shape-e", "many-classes"], &[3]),
        AtlasEntry::new(extraspecial_27_q8()?, &["shape-d", "extraspecial"], &[2]),
        AtlasEntry::new(c5c5_sl23()?, &["shape-f"], &[3]),
        AtlasEntry::new(c5c5_q8()?, &["case-iii-complement"], &[3]),
        AtlasEntry::new(affine_group(16, 15, false, "E16:C15")?, &["shape-b"], &[5]),
        AtlasEntry::new(affine_group(11, 10, false, "C11:C10")?, &["shape-a"], &[5]),
        AtlasEntry::new(affine_group(27, 26, false, "E27:C26")?, &["shape-a"], &[13]),
        AtlasEntry::new(affine_group(13, 6, false, "C13:C6")?, &["shape-b"], &[3]),
        AtlasEntry::new(affine_group(9, 8, false, "E9:C8")?, &["shape-d"], &[2]),
        AtlasEntry::new(e9_q8()?, &["shape-d"], &[2]),
        AtlasEntry::new(affine_group(9, 8, true, "E9:SD16")?, &["shape-d"], &[2]),
        AtlasEntry::new(affine_group(5, 4, false, "C5:C4")?, &["shape-d"], &[2]),
        AtlasEntry::new(affine_group(17, 16, false, "C17:C16")?, &["shape-d"], &[2]),
        AtlasEntry::new(affine_group(8, 7, false, "E8:C7")?, &["shape-d"], &[7]),
        AtlasEntry::new(alternating(5)?, &["nonsoluble"], &[5]),
    ])
}
