//! Fixtures shared by the integration tests: small Lie superalgebras,
//! random changes of basis and ad-derivations.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use superlie::liepoly::{Field, FreeLie, LiePoly, Scalar};
use superlie::superalg::{
    ad_derivation, validate_derivation, validate_structure, DerivationSpec, StructureAlgebra,
    SubalgebraSpec, Vector,
};
use superlie::words::{Alphabet, Letter, Parity};

pub fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn algebra(spec: &str, brackets: &[(&str, &str, &[(i64, &str)])]) -> StructureAlgebra {
    let a = Arc::new(Alphabet::parse_spec(spec).unwrap());
    let mut l = StructureAlgebra::new(a.clone(), Field::Rational);
    for (x, y, v) in brackets {
        let x = a.letter(x).unwrap();
        let y = a.letter(y).unwrap();
        let v: Vec<(Letter, Scalar)> = v.iter().map(|(c, g)| (a.letter(g).unwrap(), q(*c))).collect();
        l.set_bracket(x, y, v).unwrap();
    }
    assert!(validate_structure(&l).is_valid(), "fixture {spec}");
    l
}

/// `f` even, `e` odd, `[e,e] = f`.
pub fn one_one() -> StructureAlgebra {
    algebra("f:0,e:1", &[("e", "e", &[(1, "f")])])
}

pub fn sl2() -> StructureAlgebra {
    algebra(
        "e:0,h:0,f:0",
        &[("h", "e", &[(2, "e")]), ("h", "f", &[(-2, "f")]), ("e", "f", &[(1, "h")])],
    )
}

pub fn gl11() -> StructureAlgebra {
    algebra(
        "p:0,q:0,u:1,w:1",
        &[
            ("u", "w", &[(1, "p"), (1, "q")]),
            ("p", "u", &[(1, "u")]),
            ("p", "w", &[(-1, "w")]),
            ("q", "u", &[(-1, "u")]),
            ("q", "w", &[(1, "w")]),
        ],
    )
}

/// `h, z` even, `e` odd, `[h,e] = e`, `[h,z] = 2z`, `[e,e] = z`.
pub fn two_one() -> StructureAlgebra {
    algebra(
        "h:0,z:0,e:1",
        &[("h", "e", &[(1, "e")]), ("h", "z", &[(2, "z")]), ("e", "e", &[(1, "z")])],
    )
}

pub fn nonabelian2() -> StructureAlgebra {
    algebra("x:0,y:0", &[("x", "y", &[(1, "y")])])
}

pub fn abelian(parities: &[u8]) -> StructureAlgebra {
    let spec: Vec<String> = parities.iter().enumerate().map(|(i, p)| format!("a{i}:{p}")).collect();
    algebra(&spec.join(","), &[])
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.gen_range(-3..=3);
    let den = [1, 1, 2, 3][rng.gen_range(0..4)];
    Scalar::ratio(num, den)
}

fn invert(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv().expect("nonzero pivot");
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &a[col][c] * &k;
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// New basis `y_i = Σ_j M_ij x_j` with `M` invertible and parity-preserving,
/// listed in a random order.
pub fn random_change_of_basis(l: &StructureAlgebra, rng: &mut ChaCha8Rng) -> StructureAlgebra {
    let n = l.dim();
    let a = l.alphabet();
    let m = loop {
        let m: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if a.parity(i as Letter) != a.parity(j as Letter) {
                            q(0)
                        } else if i == j {
                            q(1)
                        } else if rng.gen_bool(0.4) {
                            random_scalar(rng)
                        } else {
                            q(0)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Some(inv) = invert(&m) {
            break (m, inv);
        }
    };
    let (m, inv) = m;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // new letter k stands for y_{order[k]}
    let gens: Vec<(String, Parity)> = order
        .iter()
        .map(|&i| (format!("y{i}"), a.parity(i as Letter)))
        .collect();
    let na = Arc::new(Alphabet::new(gens).unwrap());
    let mut out = StructureAlgebra::new(na, l.field());
    let y = |i: usize| -> Vector {
        (0..n)
            .filter(|&j| !m[i][j].is_zero())
            .map(|j| (j as Letter, m[i][j].clone()))
            .collect()
    };
    let position = |i: usize| order.iter().position(|&k| k == i).unwrap() as Letter;
    for ki in 0..n {
        for kj in 0..=ki {
            let (i, j) = (order[ki], order[kj]);
            let prod = l.bracket_vec(&y(i), &y(j));
            // x_k = Σ_i inv_ki y_i
            let mut value: BTreeMap<Letter, Scalar> = BTreeMap::new();
            for (&k, c) in &prod {
                for (t, w) in inv[k as usize].iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    let e = value.entry(position(t)).or_insert_with(|| q(0));
                    *e = &*e + &(c * w);
                }
            }
            value.retain(|_, c| !c.is_zero());
            if !value.is_empty() {
                out.set_bracket(ki as Letter, kj as Letter, value).unwrap();
            }
        }
    }
    assert!(validate_structure(&out).is_valid());
    out
}

pub fn base_algebras() -> Vec<StructureAlgebra> {
    let one = one_one();
    vec![
        abelian(&[0, 1]),
        abelian(&[1, 1, 0]),
        one.clone(),
        sl2(),
        gl11(),
        two_one(),
        nonabelian2(),
        one.direct_sum(&nonabelian2()).unwrap(),
        one.direct_sum(&abelian(&[1])).unwrap(),
    ]
}

/// `ad_z` for a random homogeneous `z`, with `A = L`.
pub fn random_ad(l: &StructureAlgebra, rng: &mut ChaCha8Rng) -> DerivationSpec {
    let a = l.alphabet();
    let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    let mut of: Vec<Letter> = (0..l.dim() as Letter).filter(|&x| a.parity(x) == parity).collect();
    if of.is_empty() {
        of = (0..l.dim() as Letter).collect();
    }
    let mut z = Vector::new();
    for &x in &of {
        if rng.gen_bool(0.7) {
            let c = random_scalar(rng);
            if !c.is_zero() {
                z.insert(x, c);
            }
        }
    }
    if z.is_empty() {
        z.insert(of[0], q(1));
    }
    let sub = SubalgebraSpec::whole(l);
    let d = ad_derivation(l, &sub, &z).unwrap();
    assert!(validate_derivation(l, &sub, &d).is_valid());
    d
}

pub struct Fixture {
    pub name: String,
    pub algebra: StructureAlgebra,
    pub derivation: DerivationSpec,
}

/// The (1|1) algebra with `ad_e`, then `count` random fixtures of dimension
/// at most 4.
pub fn hnn_fixtures(rng: &mut ChaCha8Rng, count: usize) -> Vec<Fixture> {
    let one = one_one();
    let e = one.alphabet().letter("e").unwrap();
    let d = ad_derivation(&one, &SubalgebraSpec::whole(&one), &Vector::from([(e, q(1))])).unwrap();
    let mut out = vec![Fixture {
        name: "(1|1) ad_e".into(),
        algebra: one,
        derivation: d,
    }];
    let bases = base_algebras();
    for i in 0..count {
        let base = &bases[i % bases.len()];
        let l = random_change_of_basis(base, rng);
        let d = random_ad(&l, rng);
        out.push(Fixture {
            name: format!("random #{i} (base {})", i % bases.len()),
            algebra: l,
            derivation: d,
        });
    }
    out
}

pub fn free(spec: &str) -> Arc<FreeLie> {
    Arc::new(FreeLie::new(Arc::new(Alphabet::parse_spec(spec).unwrap()), Field::Rational))
}

/// Random combination of super-LS basis elements of one length and one parity.
pub fn random_homogeneous(lie: &FreeLie, rng: &mut ChaCha8Rng, len: usize) -> LiePoly {
    let a = lie.alphabet();
    let basis: Vec<_> = superlie::lyndon::enumerate_super_ls_words(a, len)
        .into_iter()
        .filter(|u| u.len() == len)
        .collect();
    if basis.is_empty() {
        return LiePoly::zero();
    }
    let parity = a.word_parity(basis.choose(rng).unwrap());
    let mut p = LiePoly::zero();
    for u in basis.iter().filter(|u| a.word_parity(u) == parity) {
        if rng.gen_bool(0.5) {
            p.add_term(u.clone(), random_scalar(rng));
        }
    }
    p
}
