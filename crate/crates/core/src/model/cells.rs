//! Recurrent cell updates, their reverse-mode steps and their Jacobians.
//!
//! Conventions frozen here (the cells are sensitive to them):
//!
//! - GRU: `z = sigma(W_z x + U_z h + b_z)`, `r = sigma(W_r x + U_r h + b_r)`,
//!   `g = tanh(W_g x + U_g (r .* h) + b_g)`, `h' = (1 - z) .* h + z .* g`.
//!   The reset gate is applied to `h` before the recurrent matmul.
//! - LSTM: `i, f, o = sigma(...)`, `g = tanh(...)`, `c' = f .* c + i .* g`,
//!   `h' = o .* tanh(c')`. The dynamical state is the stacked pair `(h, c)`.
//! - Vanilla: `h' = tanh(W_x x + W_h h + b)`.

use crate::numerics::Matrix;
use crate::scalar::Scalar;

use super::{CellState, CellWeights, ModelParams};

fn sigmoid<F: Scalar>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

/// `w * x + u * h + b` evaluated elementwise through an activation.
fn gate<F: Scalar>(
    w: &Matrix<F>,
    u: &Matrix<F>,
    b: &Matrix<F>,
    x: &[F],
    h: &[F],
    act: impl Fn(F) -> F,
) -> Vec<F> {
    let mut a = w.matvec(x);
    let uh = u.matvec(h);
    for ((ai, &ui), &bi) in a.iter_mut().zip(&uh).zip(b.row(0)) {
        *ai = act(*ai + ui + bi);
    }
    a
}

/// Everything the reverse step needs from one forward step.
#[derive(Debug, Clone)]
pub enum StepCache<F> {
    Vanilla {
        x: Vec<F>,
        h_prev: Vec<F>,
        h_new: Vec<F>,
    },
    Gru {
        x: Vec<F>,
        h_prev: Vec<F>,
        z: Vec<F>,
        r: Vec<F>,
        g: Vec<F>,
    },
    Lstm {
        x: Vec<F>,
        h_prev: Vec<F>,
        c_prev: Vec<F>,
        i: Vec<F>,
        f: Vec<F>,
        o: Vec<F>,
        g: Vec<F>,
        tanh_c_new: Vec<F>,
    },
}

/// One cell update on an already-embedded input vector.
pub fn step_embedded<F: Scalar>(params: &ModelParams<F>, state: &CellState<F>, x: &[F]) -> CellState<F> {
    let (next, _) = step_embedded_cached(params, state, x);
    next
}

/// One cell update, returning the cache consumed by [`step_backward`].
pub fn step_embedded_cached<F: Scalar>(
    params: &ModelParams<F>,
    state: &CellState<F>,
    x: &[F],
) -> (CellState<F>, StepCache<F>) {
    match &params.cell {
        CellWeights::Vanilla { w_x, w_h, b } => {
            let h_new = gate(w_x, w_h, b, x, &state.h, F::tanh);
            (
                CellState {
                    h: h_new.clone(),
                    c: None,
                },
                StepCache::Vanilla {
                    x: x.to_vec(),
                    h_prev: state.h.clone(),
                    h_new,
                },
            )
        }
        CellWeights::Gru {
            w_z,
            u_z,
            b_z,
            w_r,
            u_r,
            b_r,
            w_g,
            u_g,
            b_g,
        } => {
            let h = &state.h;
            let z = gate(w_z, u_z, b_z, x, h, sigmoid);
            let r = gate(w_r, u_r, b_r, x, h, sigmoid);
            let rh: Vec<F> = r.iter().zip(h).map(|(&ri, &hi)| ri * hi).collect();
            let g = gate(w_g, u_g, b_g, x, &rh, F::tanh);
            let h_new: Vec<F> = h
                .iter()
                .zip(&z)
                .zip(&g)
                .map(|((&hi, &zi), &gi)| (F::one() - zi) * hi + zi * gi)
                .collect();
            (
                CellState { h: h_new, c: None },
                StepCache::Gru {
                    x: x.to_vec(),
                    h_prev: h.clone(),
                    z,
                    r,
                    g,
                },
            )
        }
        CellWeights::Lstm {
            w_i,
            u_i,
            b_i,
            w_f,
            u_f,
            b_f,
            w_o,
            u_o,
            b_o,
            w_g,
            u_g,
            b_g,
        } => {
            let h = &state.h;
            let c_prev = state.c.as_ref().expect("lstm state carries a cell vector");
            let i = gate(w_i, u_i, b_i, x, h, sigmoid);
            let f = gate(w_f, u_f, b_f, x, h, sigmoid);
            let o = gate(w_o, u_o, b_o, x, h, sigmoid);
            let g = gate(w_g, u_g, b_g, x, h, F::tanh);
            let c_new: Vec<F> = f
                .iter()
                .zip(c_prev)
                .zip(i.iter().zip(&g))
                .map(|((&fi, &ci), (&ii, &gi))| fi * ci + ii * gi)
                .collect();
            let tanh_c_new: Vec<F> = c_new.iter().map(|&c| c.tanh()).collect();
            let h_new: Vec<F> = o
                .iter()
                .zip(&tanh_c_new)
                .map(|(&oi, &ti)| oi * ti)
                .collect();
            (
                CellState {
                    h: h_new,
                    c: Some(c_new),
                },
                StepCache::Lstm {
                    x: x.to_vec(),
                    h_prev: h.clone(),
                    c_prev: c_prev.clone(),
                    i,
                    f,
                    o,
                    g,
                    tanh_c_new,
                },
            )
        }
    }
}

/// Cotangent flowing backwards through one step.
#[derive(Debug, Clone)]
pub struct StateCotangent<F> {
    pub dh: Vec<F>,
    pub dc: Option<Vec<F>>,
}

impl<F: Scalar> StateCotangent<F> {
    pub fn zeros_like(state: &CellState<F>) -> Self {
        StateCotangent {
            dh: vec![F::zero(); state.h.len()],
            dc: state.c.as_ref().map(|c| vec![F::zero(); c.len()]),
        }
    }
}

/// Reverse-mode step: accumulates parameter gradients into `grads` (when
/// provided) and returns the cotangents for the previous state and the input.
pub fn step_backward<F: Scalar>(
    params: &ModelParams<F>,
    cache: &StepCache<F>,
    cot: &StateCotangent<F>,
    mut grads: Option<&mut ModelParams<F>>,
) -> (StateCotangent<F>, Vec<F>) {
    match (&params.cell, cache) {
        (CellWeights::Vanilla { w_x, w_h, .. }, StepCache::Vanilla { x, h_prev, h_new }) => {
            let da: Vec<F> = cot
                .dh
                .iter()
                .zip(h_new)
                .map(|(&d, &h)| d * (F::one() - h * h))
                .collect();
            if let Some(g) = grads.take() {
                if let CellWeights::Vanilla { w_x, w_h, b } = &mut g.cell {
                    w_x.add_outer(&da, x);
                    w_h.add_outer(&da, h_prev);
                    for (bi, &d) in b.row_mut(0).iter_mut().zip(&da) {
                        *bi += d;
                    }
                }
            }
            let dx = w_x.matvec_transposed(&da);
            let dh_prev = w_h.matvec_transposed(&da);
            (
                StateCotangent {
                    dh: dh_prev,
                    dc: None,
                },
                dx,
            )
        }
        (
            CellWeights::Gru {
                w_z,
                u_z,
                w_r,
                u_r,
                w_g,
                u_g,
                ..
            },
            StepCache::Gru { x, h_prev, z, r, g },
        ) => {
            let n = h_prev.len();
            let dh = &cot.dh;
            // h' = (1 - z) .* h + z .* g
            let dz: Vec<F> = (0..n).map(|k| dh[k] * (g[k] - h_prev[k])).collect();
            let dg: Vec<F> = (0..n).map(|k| dh[k] * z[k]).collect();
            let mut dh_prev: Vec<F> = (0..n).map(|k| dh[k] * (F::one() - z[k])).collect();

            let da_g: Vec<F> = (0..n).map(|k| dg[k] * (F::one() - g[k] * g[k])).collect();
            let drh = u_g.matvec_transposed(&da_g);
            let dr: Vec<F> = (0..n).map(|k| drh[k] * h_prev[k]).collect();
            for k in 0..n {
                dh_prev[k] += drh[k] * r[k];
            }
            let da_r: Vec<F> = (0..n)
                .map(|k| dr[k] * r[k] * (F::one() - r[k]))
                .collect();
            let da_z: Vec<F> = (0..n)
                .map(|k| dz[k] * z[k] * (F::one() - z[k]))
                .collect();

            if let Some(gr) = grads.take() {
                if let CellWeights::Gru {
                    w_z,
                    u_z,
                    b_z,
                    w_r,
                    u_r,
                    b_r,
                    w_g,
                    u_g,
                    b_g,
                } = &mut gr.cell
                {
                    let rh: Vec<F> = (0..n).map(|k| r[k] * h_prev[k]).collect();
                    w_g.add_outer(&da_g, x);
                    u_g.add_outer(&da_g, &rh);
                    w_r.add_outer(&da_r, x);
                    u_r.add_outer(&da_r, h_prev);
                    w_z.add_outer(&da_z, x);
                    u_z.add_outer(&da_z, h_prev);
                    for k in 0..n {
                        b_g.row_mut(0)[k] += da_g[k];
                        b_r.row_mut(0)[k] += da_r[k];
                        b_z.row_mut(0)[k] += da_z[k];
                    }
                }
            }

            let mut dx = w_g.matvec_transposed(&da_g);
            for (d, v) in dx.iter_mut().zip(w_r.matvec_transposed(&da_r)) {
                *d += v;
            }
            for (d, v) in dx.iter_mut().zip(w_z.matvec_transposed(&da_z)) {
                *d += v;
            }
            for (d, v) in dh_prev.iter_mut().zip(u_r.matvec_transposed(&da_r)) {
                *d += v;
            }
            for (d, v) in dh_prev.iter_mut().zip(u_z.matvec_transposed(&da_z)) {
                *d += v;
            }
            (
                StateCotangent {
                    dh: dh_prev,
                    dc: None,
                },
                dx,
            )
        }
        (
            CellWeights::Lstm {
                w_i,
                u_i,
                w_f,
                u_f,
                w_o,
                u_o,
                w_g,
                u_g,
                ..
            },
            StepCache::Lstm {
                x,
                h_prev,
                c_prev,
                i,
                f,
                o,
                g,
                tanh_c_new,
            },
        ) => {
            let n = h_prev.len();
            let dh = &cot.dh;
            let zero = vec![F::zero(); n];
            let dc_in = cot.dc.as_deref().unwrap_or(&zero);

            let do_: Vec<F> = (0..n).map(|k| dh[k] * tanh_c_new[k]).collect();
            let dc: Vec<F> = (0..n)
                .map(|k| dc_in[k] + dh[k] * o[k] * (F::one() - tanh_c_new[k] * tanh_c_new[k]))
                .collect();
            let df: Vec<F> = (0..n).map(|k| dc[k] * c_prev[k]).collect();
            let di: Vec<F> = (0..n).map(|k| dc[k] * g[k]).collect();
            let dg: Vec<F> = (0..n).map(|k| dc[k] * i[k]).collect();
            let dc_prev: Vec<F> = (0..n).map(|k| dc[k] * f[k]).collect();

            let da_i: Vec<F> = (0..n).map(|k| di[k] * i[k] * (F::one() - i[k])).collect();
            let da_f: Vec<F> = (0..n).map(|k| df[k] * f[k] * (F::one() - f[k])).collect();
            let da_o: Vec<F> = (0..n).map(|k| do_[k] * o[k] * (F::one() - o[k])).collect();
            let da_g: Vec<F> = (0..n).map(|k| dg[k] * (F::one() - g[k] * g[k])).collect();

            if let Some(gr) = grads.take() {
                if let CellWeights::Lstm {
                    w_i,
                    u_i,
                    b_i,
                    w_f,
                    u_f,
                    b_f,
                    w_o,
                    u_o,
                    b_o,
                    w_g,
                    u_g,
                    b_g,
                } = &mut gr.cell
                {
                    w_i.add_outer(&da_i, x);
                    u_i.add_outer(&da_i, h_prev);
                    w_f.add_outer(&da_f, x);
                    u_f.add_outer(&da_f, h_prev);
                    w_o.add_outer(&da_o, x);
                    u_o.add_outer(&da_o, h_prev);
                    w_g.add_outer(&da_g, x);
                    u_g.add_outer(&da_g, h_prev);
                    for k in 0..n {
                        b_i.row_mut(0)[k] += da_i[k];
                        b_f.row_mut(0)[k] += da_f[k];
                        b_o.row_mut(0)[k] += da_o[k];
                        b_g.row_mut(0)[k] += da_g[k];
                    }
                }
            }

            let mut dx = w_i.matvec_transposed(&da_i);
            let mut dh_prev = u_i.matvec_transposed(&da_i);
            for (w, u, da) in [(w_f, u_f, &da_f), (w_o, u_o, &da_o), (w_g, u_g, &da_g)] {
                for (d, v) in dx.iter_mut().zip(w.matvec_transposed(da)) {
                    *d += v;
                }
                for (d, v) in dh_prev.iter_mut().zip(u.matvec_transposed(da)) {
                    *d += v;
                }
            }
            (
                StateCotangent {
                    dh: dh_prev,
                    dc: Some(dc_prev),
                },
                dx,
            )
        }
        _ => unreachable!("cache variant matches the cell type"),
    }
}

/// Analytic Jacobian of the cell update with respect to the dynamical state,
/// evaluated at `(state, x)`. For the LSTM the state is the stacked `(h, c)`
/// pair and the Jacobian is `2n x 2n`.
pub fn state_jacobian<F: Scalar>(params: &ModelParams<F>, state: &CellState<F>, x: &[F]) -> Matrix<F> {
    let n = params.config.hidden_dim;
    match &params.cell {
        CellWeights::Vanilla { w_x: _, w_h, .. } => {
            let (next, _) = step_embedded_cached(params, state, x);
            let mut j = w_h.clone();
            for k in 0..n {
                let d = F::one() - next.h[k] * next.h[k];
                for v in j.row_mut(k) {
                    *v *= d;
                }
            }
            j
        }
        CellWeights::Gru {
            u_z, u_r, u_g, ..
        } => {
            let (_, cache) = step_embedded_cached(params, state, x);
            let StepCache::Gru { h_prev, z, r, g, .. } = &cache else {
                unreachable!()
            };
            let mut j = Matrix::zeros(n, n);
            // B = U_g * diag(h .* r') * U_r, the reset-gate path.
            let hr: Vec<F> = (0..n)
                .map(|k| h_prev[k] * r[k] * (F::one() - r[k]))
                .collect();
            for a in 0..n {
                for bcol in 0..n {
                    let mut acc = u_g[(a, bcol)] * r[bcol];
                    for k in 0..n {
                        acc += u_g[(a, k)] * hr[k] * u_r[(k, bcol)];
                    }
                    j[(a, bcol)] = acc;
                }
            }
            for a in 0..n {
                let zg = z[a] * (F::one() - g[a] * g[a]);
                let zz = (g[a] - h_prev[a]) * z[a] * (F::one() - z[a]);
                for bcol in 0..n {
                    let mut v = j[(a, bcol)] * zg + zz * u_z[(a, bcol)];
                    if a == bcol {
                        v += F::one() - z[a];
                    }
                    j[(a, bcol)] = v;
                }
            }
            j
        }
        CellWeights::Lstm {
            u_i, u_f, u_o, u_g, ..
        } => {
            let (next, cache) = step_embedded_cached(params, state, x);
            let StepCache::Lstm {
                c_prev,
                i,
                f,
                o,
                g,
                tanh_c_new,
                ..
            } = &cache
            else {
                unreachable!()
            };
            let _ = next;
            let mut j = Matrix::zeros(2 * n, 2 * n);
            // dc'/dh then dh'/dh on top of it.
            for a in 0..n {
                let di = g[a] * i[a] * (F::one() - i[a]);
                let df = c_prev[a] * f[a] * (F::one() - f[a]);
                let dg = i[a] * (F::one() - g[a] * g[a]);
                let dho = tanh_c_new[a] * o[a] * (F::one() - o[a]);
                let hc = o[a] * (F::one() - tanh_c_new[a] * tanh_c_new[a]);
                for bcol in 0..n {
                    let dcdh = di * u_i[(a, bcol)] + df * u_f[(a, bcol)] + dg * u_g[(a, bcol)];
                    j[(n + a, bcol)] = dcdh;
                    j[(a, bcol)] = dho * u_o[(a, bcol)] + hc * dcdh;
                }
                // dc'/dc = diag(f); dh'/dc = diag(o (1-tanh^2 c') f).
                j[(n + a, n + a)] = f[a];
                j[(a, n + a)] = hc * f[a];
            }
            j
        }
    }
}

/// Analytic Jacobian of the cell update with respect to the embedded input.
pub fn input_jacobian<F: Scalar>(params: &ModelParams<F>, state: &CellState<F>, x: &[F]) -> Matrix<F> {
    let n = params.config.hidden_dim;
    let m = params.config.embed_dim;
    match &params.cell {
        CellWeights::Vanilla { w_x, .. } => {
            let (next, _) = step_embedded_cached(params, state, x);
            let mut j = w_x.clone();
            for k in 0..n {
                let d = F::one() - next.h[k] * next.h[k];
                for v in j.row_mut(k) {
                    *v *= d;
                }
            }
            j
        }
        CellWeights::Gru {
            w_z, w_r, w_g: w_gx, u_g, ..
        } => {
            let (_, cache) = step_embedded_cached(params, state, x);
            let StepCache::Gru { h_prev, z, r, g, .. } = &cache else {
                unreachable!()
            };
            let hr: Vec<F> = (0..n)
                .map(|k| h_prev[k] * r[k] * (F::one() - r[k]))
                .collect();
            let mut j = Matrix::zeros(n, m);
            for a in 0..n {
                let zg = z[a] * (F::one() - g[a] * g[a]);
                let zz = (g[a] - h_prev[a]) * z[a] * (F::one() - z[a]);
                for bcol in 0..m {
                    // da_g/dx = W_g + U_g diag(h r') W_r
                    let mut dag = w_gx[(a, bcol)];
                    for k in 0..n {
                        dag += u_g[(a, k)] * hr[k] * w_r[(k, bcol)];
                    }
                    j[(a, bcol)] = zz * w_z[(a, bcol)] + zg * dag;
                }
            }
            j
        }
        CellWeights::Lstm {
            w_i, w_f, w_o, w_g, ..
        } => {
            let (_, cache) = step_embedded_cached(params, state, x);
            let StepCache::Lstm {
                c_prev,
                i,
                f,
                o,
                g,
                tanh_c_new,
                ..
            } = &cache
            else {
                unreachable!()
            };
            let mut j = Matrix::zeros(2 * n, m);
            for a in 0..n {
                let di = g[a] * i[a] * (F::one() - i[a]);
                let df = c_prev[a] * f[a] * (F::one() - f[a]);
                let dg = i[a] * (F::one() - g[a] * g[a]);
                let dho = tanh_c_new[a] * o[a] * (F::one() - o[a]);
                let hc = o[a] * (F::one() - tanh_c_new[a] * tanh_c_new[a]);
                for bcol in 0..m {
                    let dcdx =
                        di * w_i[(a, bcol)] + df * w_f[(a, bcol)] + dg * w_g[(a, bcol)];
                    j[(n + a, bcol)] = dcdx;
                    j[(a, bcol)] = dho * w_o[(a, bcol)] + hc * dcdx;
                }
            }
            j
        }
    }
}
