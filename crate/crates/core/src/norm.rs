//! Solving `sigma^d(lambda) = a * lambda`, extending the field when needed.

use crate::error::{Error, Result};
use crate::field::{Embedding, FFElem, FieldConfig, GaloisField, MAX_FIELD_ORDER};
use crate::fqlin::nullspace;

/// A solution of the norm equation, living in the realization `cfg`
/// (an extension of degree `ext_degree` of the input field).
#[derive(Clone, Debug)]
pub struct NormSolution {
    pub lambda: FFElem,
    pub ext_degree: u32,
    pub cfg: FieldConfig,
    pub embedding: Embedding,
}

/// Kernel of the F_p-linear map `x -> sigma^d(x) - a x` on the realized field,
/// as coordinate vectors in the power basis.
fn kernel(cfg: &FieldConfig, d: u64, a: FFElem) -> Vec<FFElem> {
    let gf = cfg.field();
    let m = gf.degree() as usize;
    let fp = GaloisField::new(gf.p(), 1, None).expect("prime field");
    // column j: image of x^j
    let basis: Vec<FFElem> = (0..m)
        .map(|j| {
            let mut c = vec![0u32; m];
            c[j] = 1;
            gf.from_coeffs(&c).unwrap()
        })
        .collect();
    let images: Vec<Vec<u32>> = basis
        .iter()
        .map(|&x| gf.to_coeffs(gf.sub(cfg.sigma_pow(x, d as i64), gf.mul(a, x))))
        .collect();
    let mat: Vec<Vec<FFElem>> = (0..m)
        .map(|i| (0..m).map(|j| FFElem::from_encoding(images[j][i])).collect())
        .collect();
    let ns = nullspace(&fp, &mat, m);
    match ns.first() {
        None => Vec::new(),
        Some(v) => {
            let c: Vec<u32> = v.iter().map(|x| x.encoding()).collect();
            vec![gf.from_coeffs(&c).unwrap()]
        }
    }
}

/// Find `lambda != 0` with `sigma^d(lambda) = a lambda`, searching extensions of
/// degree `e = 1, 2, ...` while the realized field fits the element encoding.
pub fn solve_norm_equation(cfg: &FieldConfig, d: u64, a: FFElem) -> Result<NormSolution> {
    if cfg.sigma_is_identity() {
        return Err(Error::SigmaIsIdentity);
    }
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    if a == FFElem::ONE {
        let (c, emb) = cfg.extend(1)?;
        return Ok(NormSolution { lambda: FFElem::ONE, ext_degree: 1, cfg: c, embedding: emb });
    }
    let mut e = 1u32;
    let mut last_ok = 0;
    loop {
        let order = (cfg.p() as u128).pow(cfg.m() * e);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::NoSolutionWithinBound(last_ok));
        }
        last_ok = e;
        let (big, emb) = cfg.extend(e)?;
        let a_big = emb.map(a);
        if let Some(&lambda) = kernel(&big, d, a_big).first() {
            let check = big.field().div(big.sigma_pow(lambda, d as i64), lambda);
            if check != Some(a_big) {
                return Err(Error::Internal("norm equation solution fails its check".into()));
            }
            return Ok(NormSolution { lambda, ext_degree: e, cfg: big, embedding: emb });
        }
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_equal_one_is_trivial() {
        let cfg = FieldConfig::new(2, 2, 1, 2, None).unwrap();
        let sol = solve_norm_equation(&cfg, 1, FFElem::ONE).unwrap();
        assert_eq!((sol.lambda, sol.ext_degree), (FFElem::ONE, 1));
    }

    #[test]
    fn f4_generator_by_exhaustion() {
        let cfg = FieldConfig::new(2, 2, 1, 2, None).unwrap();
        let g = cfg.field().gen();
        // exhaustive oracle: the solutions in F_4 are exactly {x : x^2 = g x}
        let brute: Vec<_> = cfg
            .field()
            .elements()
            .filter(|&x| !x.is_zero() && cfg.sigma(x) == cfg.field().mul(g, x))
            .collect();
        assert_eq!(brute, vec![g]);
        let sol = solve_norm_equation(&cfg, 1, g).unwrap();
        assert_eq!(sol.ext_degree, 1);
        assert_eq!(sol.lambda, g);
    }

    #[test]
    fn extension_needed_for_d2_over_f4() {
        // sigma^2 = id on F_4, so lambda^3 = g forces lambda of order 9: F_64
        let cfg = FieldConfig::new(2, 2, 1, 2, None).unwrap();
        let g = cfg.field().gen();
        for e in [1u32, 2] {
            let (big, emb) = cfg.extend(e).unwrap();
            let gb = emb.map(g);
            assert!(big
                .field()
                .elements()
                .all(|x| x.is_zero() || big.sigma_pow(x, 2) != big.field().mul(gb, x)));
        }
        let sol = solve_norm_equation(&cfg, 2, g).unwrap();
        assert_eq!(sol.ext_degree, 3);
        let f = sol.cfg.field();
        let gb = sol.embedding.map(g);
        assert_eq!(f.div(sol.cfg.sigma_pow(sol.lambda, 2), sol.lambda), Some(gb));
    }

    #[test]
    fn identity_sigma_is_refused() {
        let cfg = FieldConfig::new(3, 1, 0, 2, None).unwrap();
        assert!(matches!(solve_norm_equation(&cfg, 1, FFElem::ONE), Err(Error::SigmaIsIdentity)));
    }

    #[test]
    fn every_nonzero_a_solvable_over_f9() {
        let cfg = FieldConfig::new(3, 2, 1, 2, None).unwrap();
        for d in 1..=3u64 {
            for a in cfg.field().elements().filter(|x| !x.is_zero()) {
                let sol = solve_norm_equation(&cfg, d, a).unwrap();
                let f = sol.cfg.field();
                assert_eq!(
                    f.div(sol.cfg.sigma_pow(sol.lambda, d as i64), sol.lambda),
                    Some(sol.embedding.map(a))
                );
            }
        }
    }
}
