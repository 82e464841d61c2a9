//! Differentiable tensor operations.
//!
//! Every op pushes one node; the backward closure captures the `Rc` values it
//! needs and returns one gradient slot per parent (`None` for parents that do
//! not require gradients).

use super::{BackwardFn, Tensor, Var};
use ndarray::{concatenate, ArrayView2, Axis, IxDyn, Slice};

const GELU_C0: f64 = 0.797_884_560_802_865_4; // sqrt(2/pi)
const GELU_C1: f64 = 0.044_715;

fn view2(t: &Tensor, rows: usize, cols: usize) -> ArrayView2<'_, f64> {
    t.view()
        .into_shape_with_order((rows, cols))
        .expect("standard-layout tensor reshapes to 2-D")
}

/// Sum `g` over leading axes until it has `shape` (an exact suffix of g's shape).
fn reduce_to_suffix(g: &Tensor, shape: &[usize]) -> Tensor {
    let lead = g.ndim() - shape.len();
    let mut out = g.to_owned();
    for _ in 0..lead {
        out = out.sum_axis(Axis(0));
    }
    debug_assert_eq!(out.shape(), shape);
    out
}

impl<'t> Var<'t> {
    fn unary<F>(self, value: Tensor, back: F) -> Var<'t>
    where
        F: Fn(&Tensor) -> Tensor + 'static,
    {
        let ng = self.needs_grad();
        let backward: Option<BackwardFn> = if ng {
            Some(Box::new(move |g| vec![Some(back(g))]))
        } else {
            None
        };
        Var {
            tape: self.tape,
            index: self.tape.push(value, ng, vec![self.index], backward),
        }
    }

    fn binary<F>(self, rhs: Var<'t>, value: Tensor, back: F) -> Var<'t>
    where
        F: Fn(&Tensor, bool, bool) -> (Option<Tensor>, Option<Tensor>) + 'static,
    {
        let na = self.needs_grad();
        let nb = rhs.needs_grad();
        let backward: Option<BackwardFn> = if na || nb {
            Some(Box::new(move |g| {
                let (ga, gb) = back(g, na, nb);
                vec![ga, gb]
            }))
        } else {
            None
        };
        Var {
            tape: self.tape,
            index: self
                .tape
                .push(value, na || nb, vec![self.index, rhs.index], backward),
        }
    }

    /// Elementwise sum of two same-shape tensors.
    pub fn add(self, rhs: Var<'t>) -> Var<'t> {
        let a = self.value();
        let b = rhs.value();
        assert_eq!(a.shape(), b.shape(), "add: shape mismatch");
        let value = &*a + &*b;
        self.binary(rhs, value, |g, na, nb| {
            (
                na.then(|| g.clone()),
                nb.then(|| g.clone()),
            )
        })
    }

    /// Add `rhs` broadcast over leading axes; `rhs.shape()` must be a suffix
    /// of `self.shape()`.
    pub fn add_suffix(self, rhs: Var<'t>) -> Var<'t> {
        let a = self.value();
        let b = rhs.value();
        let (an, bn) = (a.ndim(), b.ndim());
        assert!(bn <= an && a.shape()[an - bn..] == *b.shape(), "add_suffix: not a suffix");
        let value = &*a + &*b;
        let bshape = b.shape().to_vec();
        self.binary(rhs, value, move |g, na, nb| {
            (
                na.then(|| g.clone()),
                nb.then(|| reduce_to_suffix(g, &bshape)),
            )
        })
    }

    pub fn sub(self, rhs: Var<'t>) -> Var<'t> {
        let a = self.value();
        let b = rhs.value();
        assert_eq!(a.shape(), b.shape(), "sub: shape mismatch");
        let value = &*a - &*b;
        self.binary(rhs, value, |g, na, nb| {
            (na.then(|| g.clone()), nb.then(|| g.mapv(|x| -x)))
        })
    }

    /// Elementwise product of two same-shape tensors.
    pub fn mul(self, rhs: Var<'t>) -> Var<'t> {
        let a = self.value();
        let b = rhs.value();
        assert_eq!(a.shape(), b.shape(), "mul: shape mismatch");
        let value = &*a * &*b;
        let (ac, bc) = (a.clone(), b.clone());
        self.binary(rhs, value, move |g, na, nb| {
            (na.then(|| g * &*bc), nb.then(|| g * &*ac))
        })
    }

    pub fn neg(self) -> Var<'t> {
        let value = self.value().mapv(|x| -x);
        self.unary(value, |g| g.mapv(|x| -x))
    }

    pub fn scale(self, c: f64) -> Var<'t> {
        let value = self.value().mapv(|x| c * x);
        self.unary(value, move |g| g.mapv(|x| c * x))
    }

    /// Matrix product with a 2-D weight: `[.., m, k] x [k, n] -> [.., m, n]`.
    pub fn matmul(self, rhs: Var<'t>) -> Var<'t> {
        let a = self.value();
        let w = rhs.value();
        assert!(a.ndim() >= 2 && w.ndim() == 2, "matmul: rank mismatch");
        let k = a.shape()[a.ndim() - 1];
        assert_eq!(k, w.shape()[0], "matmul: inner dimension mismatch");
        let n = w.shape()[1];
        let rows: usize = a.len() / k;
        let w2 = view2(&w, k, n);
        let y2 = view2(&a, rows, k).dot(&w2);
        let mut out_shape = a.shape().to_vec();
        *out_shape.last_mut().unwrap() = n;
        let value = y2.into_dyn().into_shape_with_order(IxDyn(&out_shape)).unwrap();
        let (ac, wc) = (a.clone(), w.clone());
        let a_shape = ac.shape().to_vec();
        self.binary(rhs, value, move |g, na, nb| {
            let g2 = view2(g, rows, n);
            let ga = na.then(|| {
                let w2 = view2(&wc, k, n);
                g2.dot(&w2.t())
                    .into_dyn()
                    .into_shape_with_order(IxDyn(&a_shape))
                    .unwrap()
            });
            let gw = nb.then(|| view2(&ac, rows, k).t().dot(&g2).into_dyn());
            (ga, gw)
        })
    }

    /// Batched matrix product `[b, m, k] x [b, k, n] -> [b, m, n]`.
    pub fn bmm(self, rhs: Var<'t>) -> Var<'t> {
        let a = self.value();
        let b = rhs.value();
        assert!(a.ndim() == 3 && b.ndim() == 3, "bmm: expects rank 3");
        let (nb_, m, k) = (a.shape()[0], a.shape()[1], a.shape()[2]);
        assert_eq!(nb_, b.shape()[0], "bmm: batch mismatch");
        assert_eq!(k, b.shape()[1], "bmm: inner dimension mismatch");
        let n = b.shape()[2];
        let mut value = Tensor::zeros(IxDyn(&[nb_, m, n]));
        for i in 0..nb_ {
            let ai = a.index_axis(Axis(0), i);
            let bi = b.index_axis(Axis(0), i);
            let ai2 = ai.into_dimensionality::<ndarray::Ix2>().unwrap();
            let bi2 = bi.into_dimensionality::<ndarray::Ix2>().unwrap();
            value
                .index_axis_mut(Axis(0), i)
                .assign(&ai2.dot(&bi2));
        }
        let (ac, bc) = (a.clone(), b.clone());
        self.binary(rhs, value, move |g, na, nbg| {
            let ga = na.then(|| {
                let mut out = Tensor::zeros(IxDyn(&[nb_, m, k]));
                for i in 0..nb_ {
                    let gi = g
                        .index_axis(Axis(0), i)
                        .into_dimensionality::<ndarray::Ix2>()
                        .unwrap();
                    let bi = bc
                        .index_axis(Axis(0), i)
                        .into_dimensionality::<ndarray::Ix2>()
                        .unwrap();
                    out.index_axis_mut(Axis(0), i).assign(&gi.dot(&bi.t()));
                }
                out
            });
            let gb = nbg.then(|| {
                let mut out = Tensor::zeros(IxDyn(&[nb_, k, n]));
                for i in 0..nb_ {
                    let gi = g
                        .index_axis(Axis(0), i)
                        .into_dimensionality::<ndarray::Ix2>()
                        .unwrap();
                    let ai = ac
                        .index_axis(Axis(0), i)
                        .into_dimensionality::<ndarray::Ix2>()
                        .unwrap();
                    out.index_axis_mut(Axis(0), i).assign(&ai.t().dot(&gi));
                }
                out
            });
            (ga, gb)
        })
    }

    /// Transpose the last two axes.
    pub fn t2(self) -> Var<'t> {
        let nd = self.value().ndim();
        assert!(nd >= 2);
        let mut axes: Vec<usize> = (0..nd).collect();
        axes.swap(nd - 2, nd - 1);
        self.permute(&axes)
    }

    pub fn permute(self, axes: &[usize]) -> Var<'t> {
        let a = self.value();
        assert_eq!(axes.len(), a.ndim(), "permute: axis count mismatch");
        let value = a.view().permuted_axes(IxDyn(axes)).to_owned();
        let mut inverse = vec![0usize; axes.len()];
        for (i, &ax) in axes.iter().enumerate() {
            inverse[ax] = i;
        }
        self.unary(value, move |g| {
            g.view().permuted_axes(IxDyn(&inverse)).to_owned()
        })
    }

    pub fn reshape(self, shape: &[usize]) -> Var<'t> {
        let a = self.value();
        assert_eq!(
            a.len(),
            shape.iter().product::<usize>(),
            "reshape: element count mismatch"
        );
        let value = a
            .view()
            .into_shape_with_order(IxDyn(shape))
            .expect("standard layout reshape")
            .to_owned();
        let orig = a.shape().to_vec();
        self.unary(value, move |g| {
            g.view()
                .into_shape_with_order(IxDyn(&orig))
                .expect("gradient reshape")
                .to_owned()
        })
    }

    /// Contiguous slice `[start, end)` along `axis`, keeping the axis.
    pub fn slice_ax(self, axis: usize, start: usize, end: usize) -> Var<'t> {
        let a = self.value();
        assert!(end <= a.shape()[axis] && start < end, "slice_ax: bad range");
        let value = a
            .slice_axis(Axis(axis), Slice::from(start..end))
            .to_owned();
        let full = a.shape().to_vec();
        self.unary(value, move |g| {
            let mut out = Tensor::zeros(IxDyn(&full));
            out.slice_axis_mut(Axis(axis), Slice::from(start..end))
                .assign(g);
            out
        })
    }

    /// Select index `i` along `axis`, dropping the axis.
    pub fn index_ax(self, axis: usize, i: usize) -> Var<'t> {
        let a = self.value();
        let value = a.index_axis(Axis(axis), i).to_owned();
        let full = a.shape().to_vec();
        self.unary(value, move |g| {
            let mut out = Tensor::zeros(IxDyn(&full));
            out.index_axis_mut(Axis(axis), i).assign(g);
            out
        })
    }

    /// Sum of every element, as a 0-d tensor.
    pub fn sum_all(self) -> Var<'t> {
        let a = self.value();
        let value = Tensor::from_elem(IxDyn(&[]), a.sum());
        let shape = a.shape().to_vec();
        self.unary(value, move |g| {
            Tensor::from_elem(IxDyn(&shape), g.iter().next().copied().unwrap())
        })
    }

    pub fn mean_all(self) -> Var<'t> {
        let n = self.value().len();
        self.sum_all().scale(1.0 / n as f64)
    }

    /// Sum over `axis`, dropping it.
    pub fn sum_ax(self, axis: usize) -> Var<'t> {
        let a = self.value();
        let value = a.sum_axis(Axis(axis));
        let full = a.shape().to_vec();
        self.unary(value, move |g| {
            let gx = g.view().insert_axis(Axis(axis));
            gx.broadcast(IxDyn(&full)).unwrap().to_owned()
        })
    }

    /// Mean over `axis`, dropping it.
    pub fn mean_ax(self, axis: usize) -> Var<'t> {
        let n = self.value().shape()[axis];
        self.sum_ax(axis).scale(1.0 / n as f64)
    }

    /// Maximum over the last axis, dropping it. Gradient flows to the first
    /// maximal element of each row.
    pub fn max_last(self) -> Var<'t> {
        let a = self.value();
        let nd = a.ndim();
        let d = a.shape()[nd - 1];
        let rows = a.len() / d;
        let a2 = view2(&a, rows, d);
        let mut vals = Vec::with_capacity(rows);
        let mut idxs = Vec::with_capacity(rows);
        for r in 0..rows {
            let row = a2.row(r);
            let (mut bi, mut bv) = (0usize, f64::NEG_INFINITY);
            for (i, &x) in row.iter().enumerate() {
                if x > bv {
                    bv = x;
                    bi = i;
                }
            }
            vals.push(bv);
            idxs.push(bi);
        }
        let out_shape: Vec<usize> = a.shape()[..nd - 1].to_vec();
        let value = Tensor::from_shape_vec(IxDyn(&out_shape), vals).unwrap();
        let full = a.shape().to_vec();
        self.unary(value, move |g| {
            let mut out = Tensor::zeros(IxDyn(&full));
            {
                let mut o2 = out.view_mut().into_shape_with_order((rows, d)).unwrap();
                for (r, &gi) in g.iter().enumerate() {
                    o2[[r, idxs[r]]] = gi;
                }
            }
            out
        })
    }

    /// Row-wise softmax over the last axis.
    pub fn softmax_last(self) -> Var<'t> {
        let a = self.value();
        let nd = a.ndim();
        let d = a.shape()[nd - 1];
        let rows = a.len() / d;
        let mut value = a.as_ref().clone();
        {
            let mut v2 = value.view_mut().into_shape_with_order((rows, d)).unwrap();
            for mut row in v2.rows_mut() {
                let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                row.mapv_inplace(|x| (x - m).exp());
                let s: f64 = row.sum();
                row.mapv_inplace(|x| x / s);
            }
        }
        let y = value.clone();
        let full = a.shape().to_vec();
        self.unary(value, move |g| {
            let mut out = Tensor::zeros(IxDyn(&full));
            {
                let g2 = view2(g, rows, d);
                let y2 = view2(&y, rows, d);
                let mut o2 = out.view_mut().into_shape_with_order((rows, d)).unwrap();
                for r in 0..rows {
                    let gr = g2.row(r);
                    let yr = y2.row(r);
                    let dot: f64 = gr.iter().zip(yr.iter()).map(|(a, b)| a * b).sum();
                    for c in 0..d {
                        o2[[r, c]] = yr[c] * (gr[c] - dot);
                    }
                }
            }
            out
        })
    }

    /// Smooth tanh-form gelu.
    pub fn gelu(self) -> Var<'t> {
        let a = self.value();
        let value = a.mapv(|x| {
            let u = GELU_C0 * (x + GELU_C1 * x * x * x);
            0.5 * x * (1.0 + u.tanh())
        });
        let ac = a.clone();
        self.unary(value, move |g| {
            let mut out = g.clone();
            out.zip_mut_with(&ac, |gi, &x| {
                let u = GELU_C0 * (x + GELU_C1 * x * x * x);
                let t = u.tanh();
                let du = GELU_C0 * (1.0 + 3.0 * GELU_C1 * x * x);
                *gi *= 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du;
            });
            out
        })
    }

    pub fn log(self) -> Var<'t> {
        let a = self.value();
        let value = a.mapv(f64::ln);
        let ac = a.clone();
        self.unary(value, move |g| {
            let mut out = g.clone();
            out.zip_mut_with(&ac, |gi, &x| *gi /= x);
            out
        })
    }

    /// Elementwise `max(x, lo)`; gradient passes where `x >= lo`.
    pub fn clamp_min(self, lo: f64) -> Var<'t> {
        let a = self.value();
        let value = a.mapv(|x| x.max(lo));
        let ac = a.clone();
        self.unary(value, move |g| {
            let mut out = g.clone();
            out.zip_mut_with(&ac, |gi, &x| {
                if x < lo {
                    *gi = 0.0;
                }
            });
            out
        })
    }

    /// Layer normalization over the last axis with affine gain/bias.
    pub fn layer_norm(self, gain: Var<'t>, bias: Var<'t>, eps: f64) -> Var<'t> {
        let a = self.value();
        let gav = gain.value();
        let biv = bias.value();
        let nd = a.ndim();
        let d = a.shape()[nd - 1];
        assert_eq!(gav.shape(), &[d], "layer_norm: gain shape");
        assert_eq!(biv.shape(), &[d], "layer_norm: bias shape");
        let rows = a.len() / d;
        let mut xhat = Tensor::zeros(IxDyn(a.shape()));
        let mut inv = vec![0.0f64; rows];
        let mut value = Tensor::zeros(IxDyn(a.shape()));
        {
            let a2 = view2(&a, rows, d);
            let mut x2 = xhat.view_mut().into_shape_with_order((rows, d)).unwrap();
            let mut v2 = value.view_mut().into_shape_with_order((rows, d)).unwrap();
            let g1 = gav.view().into_shape_with_order(d).unwrap();
            let b1 = biv.view().into_shape_with_order(d).unwrap();
            for r in 0..rows {
                let row = a2.row(r);
                let mu = row.sum() / d as f64;
                let var = row.iter().map(|&x| (x - mu) * (x - mu)).sum::<f64>() / d as f64;
                let iv = 1.0 / (var + eps).sqrt();
                inv[r] = iv;
                for c in 0..d {
                    let xh = (row[c] - mu) * iv;
                    x2[[r, c]] = xh;
                    v2[[r, c]] = g1[c] * xh + b1[c];
                }
            }
        }
        let na = self.needs_grad();
        let ng = gain.needs_grad();
        let nb = bias.needs_grad();
        let needs = na || ng || nb;
        let full = a.shape().to_vec();
        let gac = gav.clone();
        let backward: Option<BackwardFn> = if needs {
            Some(Box::new(move |g| {
                let g2 = view2(g, rows, d);
                let x2 = view2(&xhat, rows, d);
                let g1 = gac.view().into_shape_with_order(d).unwrap();
                let dgain = ng.then(|| {
                    let mut out = vec![0.0f64; d];
                    for r in 0..rows {
                        for c in 0..d {
                            out[c] += g2[[r, c]] * x2[[r, c]];
                        }
                    }
                    Tensor::from_shape_vec(IxDyn(&[d]), out).unwrap()
                });
                let dbias = nb.then(|| {
                    let mut out = vec![0.0f64; d];
                    for r in 0..rows {
                        for c in 0..d {
                            out[c] += g2[[r, c]];
                        }
                    }
                    Tensor::from_shape_vec(IxDyn(&[d]), out).unwrap()
                });
                let dx = na.then(|| {
                    let mut out = Tensor::zeros(IxDyn(&full));
                    {
                        let mut o2 =
                            out.view_mut().into_shape_with_order((rows, d)).unwrap();
                        for r in 0..rows {
                            let mut mean_dxhat = 0.0;
                            let mut mean_dxhat_xhat = 0.0;
                            for c in 0..d {
                                let dxh = g2[[r, c]] * g1[c];
                                mean_dxhat += dxh;
                                mean_dxhat_xhat += dxh * x2[[r, c]];
                            }
                            mean_dxhat /= d as f64;
                            mean_dxhat_xhat /= d as f64;
                            for c in 0..d {
                                let dxh = g2[[r, c]] * g1[c];
                                o2[[r, c]] =
                                    inv[r] * (dxh - mean_dxhat - x2[[r, c]] * mean_dxhat_xhat);
                            }
                        }
                    }
                    out
                });
                vec![dx, dgain, dbias]
            }))
        } else {
            None
        };
        Var {
            tape: self.tape,
            index: self.tape.push(
                value,
                needs,
                vec![self.index, gain.index, bias.index],
                backward,
            ),
        }
    }

    /// Normalize each last-axis row to unit Euclidean norm; zero rows stay zero.
    pub fn unit_normalize_last(self) -> Var<'t> {
        const TINY: f64 = 1e-300;
        let a = self.value();
        let nd = a.ndim();
        let d = a.shape()[nd - 1];
        let rows = a.len() / d;
        let mut value = a.as_ref().clone();
        let mut inv = vec![0.0f64; rows];
        {
            let mut v2 = value.view_mut().into_shape_with_order((rows, d)).unwrap();
            for (r, mut row) in v2.rows_mut().into_iter().enumerate() {
                let n2: f64 = row.iter().map(|&x| x * x).sum();
                if n2 <= TINY {
                    log::debug!("unit_normalize_last: zero-norm row {r}, emitting zeros");
                    row.fill(0.0);
                } else {
                    let iv = 1.0 / n2.sqrt();
                    inv[r] = iv;
                    row.mapv_inplace(|x| x * iv);
                }
            }
        }
        let y = value.clone();
        let full = a.shape().to_vec();
        self.unary(value, move |g| {
            let mut out = Tensor::zeros(IxDyn(&full));
            {
                let g2 = view2(g, rows, d);
                let y2 = view2(&y, rows, d);
                let mut o2 = out.view_mut().into_shape_with_order((rows, d)).unwrap();
                for r in 0..rows {
                    let gr = g2.row(r);
                    let yr = y2.row(r);
                    let dot: f64 = gr.iter().zip(yr.iter()).map(|(a, b)| a * b).sum();
                    for c in 0..d {
                        o2[[r, c]] = inv[r] * (gr[c] - yr[c] * dot);
                    }
                }
            }
            out
        })
    }

    /// Divide each last-axis row by its sum (rows must have nonzero sums).
    pub fn row_normalize_last(self) -> Var<'t> {
        let a = self.value();
        let nd = a.ndim();
        let d = a.shape()[nd - 1];
        let rows = a.len() / d;
        let mut value = a.as_ref().clone();
        let mut invs = vec![0.0f64; rows];
        {
            let mut v2 = value.view_mut().into_shape_with_order((rows, d)).unwrap();
            for (r, mut row) in v2.rows_mut().into_iter().enumerate() {
                let s: f64 = row.sum();
                let iv = 1.0 / s;
                invs[r] = iv;
                row.mapv_inplace(|x| x * iv);
            }
        }
        let y = value.clone();
        let full = a.shape().to_vec();
        self.unary(value, move |g| {
            let mut out = Tensor::zeros(IxDyn(&full));
            {
                let g2 = view2(g, rows, d);
                let y2 = view2(&y, rows, d);
                let mut o2 = out.view_mut().into_shape_with_order((rows, d)).unwrap();
                for r in 0..rows {
                    let gr = g2.row(r);
                    let yr = y2.row(r);
                    let dot: f64 = gr.iter().zip(yr.iter()).map(|(a, b)| a * b).sum();
                    for c in 0..d {
                        o2[[r, c]] = invs[r] * (gr[c] - dot);
                    }
                }
            }
            out
        })
    }

    /// Pick one column per row: `[r, c] -> [r]` with `y[r] = x[r, idx[r]]`.
    pub fn gather_rows(self, indices: &[usize]) -> Var<'t> {
        let a = self.value();
        assert_eq!(a.ndim(), 2, "gather_rows: expects rank 2");
        let (r, c) = (a.shape()[0], a.shape()[1]);
        assert_eq!(indices.len(), r, "gather_rows: index count mismatch");
        let a2 = view2(&a, r, c);
        let vals: Vec<f64> = indices.iter().enumerate().map(|(i, &j)| a2[[i, j]]).collect();
        let value = Tensor::from_shape_vec(IxDyn(&[r]), vals).unwrap();
        let idx = indices.to_vec();
        self.unary(value, move |g| {
            let mut out = Tensor::zeros(IxDyn(&[r, c]));
            {
                let mut o2 = out.view_mut().into_shape_with_order((r, c)).unwrap();
                for (i, &j) in idx.iter().enumerate() {
                    o2[[i, j]] = g[i];
                }
            }
            out
        })
    }
}

/// Concatenate along an existing axis.
pub fn concat<'t>(axis: usize, parts: &[Var<'t>]) -> Var<'t> {
    assert!(!parts.is_empty(), "concat: no parts");
    let tape = parts[0].tape;
    let values: Vec<_> = parts.iter().map(|p| p.value()).collect();
    let views: Vec<_> = values.iter().map(|v| v.view()).collect();
    let value = concatenate(Axis(axis), &views).expect("concat shapes compatible");
    let needs: Vec<bool> = parts.iter().map(|p| p.needs_grad()).collect();
    let any = needs.iter().any(|&b| b);
    let sizes: Vec<usize> = values.iter().map(|v| v.shape()[axis]).collect();
    let backward: Option<BackwardFn> = if any {
        Some(Box::new(move |g| {
            let mut out = Vec::with_capacity(sizes.len());
            let mut off = 0;
            for (i, &s) in sizes.iter().enumerate() {
                if needs[i] {
                    out.push(Some(
                        g.slice_axis(Axis(axis), Slice::from(off..off + s)).to_owned(),
                    ));
                } else {
                    out.push(None);
                }
                off += s;
            }
            out
        }))
    } else {
        None
    };
    Var {
        tape,
        index: tape.push(value, any, parts.iter().map(|p| p.index).collect(), backward),
    }
}

/// Stack along a fresh axis.
pub fn stack<'t>(axis: usize, parts: &[Var<'t>]) -> Var<'t> {
    assert!(!parts.is_empty(), "stack: no parts");
    let expanded: Vec<Var<'t>> = parts
        .iter()
        .map(|p| {
            let mut shape = p.shape();
            shape.insert(axis, 1);
            p.reshape(&shape)
        })
        .collect();
    concat(axis, &expanded)
}

