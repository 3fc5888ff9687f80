use super::HsvdResult;
use crate::error::{HsvdError, Result};
use crate::linalg::{DenseMatrix, SignatureVector};
use crate::scalar::Real;

/// Output of [`border`].
#[derive(Clone, Debug, PartialEq)]
pub struct Bordered<T> {
    pub g: DenseMatrix<T>,
    pub j: SignatureVector,
    pub strip: BorderStrip,
}

/// Records what [`border`] added so the results can be cut back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BorderStrip {
    /// Original shape.
    pub n: usize,
    pub r: usize,
    /// Column index of the synthetic unit column, if one was inserted.
    pub synthetic: Option<usize>,
}

/// Embeds `g` (n x r) into a `target_n x target_r` factor. For odd `r` a
/// unit column with its 1 in row `n` is inserted at position `p`, keeping the
/// positive columns first; remaining rows are zero.
pub fn border<T: Real>(
    g: &DenseMatrix<T>,
    j: &SignatureVector,
    target_r: usize,
    target_n: usize,
) -> Result<Bordered<T>> {
    let (n, r) = (g.rows(), g.cols());
    if j.len() != r {
        return Err(HsvdError::shape("signature length differs from column count"));
    }
    if target_r % 2 != 0 || !(target_r == r || target_r == r + 1) {
        return Err(HsvdError::shape(format!(
            "target column count {target_r} must be even and equal r or r + 1 (r = {r})"
        )));
    }
    let extra = target_r - r;
    if target_n < n + extra || target_n < target_r {
        return Err(HsvdError::shape(format!(
            "target row count {target_n} too small for {n}x{r} bordered to {target_r} columns"
        )));
    }

    let p = j.p();
    let mut out = DenseMatrix::zeros(target_n, target_r);
    for src in 0..r {
        let dst = if extra == 1 && src >= p { src + 1 } else { src };
        out.col_mut(dst)[..n].copy_from_slice(g.col(src));
    }
    let synthetic = (extra == 1).then(|| {
        out.col_mut(p)[n] = T::one();
        p
    });
    let j = SignatureVector::new(target_r, p + extra)?;
    Ok(Bordered {
        g: out,
        j,
        strip: BorderStrip { n, r, synthetic },
    })
}

impl BorderStrip {
    /// Drops the synthetic column and padding rows from a result computed on
    /// the bordered factor.
    pub fn strip<T: Real>(&self, res: HsvdResult<T>) -> HsvdResult<T> {
        let keep: Vec<usize> = (0..res.sigma.len())
            .filter(|&c| Some(c) != self.synthetic)
            .collect();
        let pick = |v: &[T]| keep.iter().map(|&c| v[c]).collect::<Vec<_>>();
        let mut u = DenseMatrix::zeros(self.n, self.r);
        for (dst, &src) in keep.iter().enumerate() {
            u.col_mut(dst).copy_from_slice(&res.u.col(src)[..self.n]);
        }
        let vinv_t = res.vinv_t.as_ref().map(|v| {
            let mut out = DenseMatrix::zeros(self.r, self.r);
            for (dc, &sc) in keep.iter().enumerate() {
                for (dr, &sr) in keep.iter().enumerate() {
                    out.col_mut(dc)[dr] = v.col(sc)[sr];
                }
            }
            out
        });
        HsvdResult {
            sigma: pick(&res.sigma),
            u,
            vinv_t,
            lambda: pick(&res.lambda),
            signs: keep.iter().map(|&c| res.signs[c]).collect(),
            sweeps_used: res.sweeps_used,
            stop_reason: res.stop_reason,
            telemetry: res.telemetry,
        }
    }
}
