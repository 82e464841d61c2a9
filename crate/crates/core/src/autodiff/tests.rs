use super::*;
use ndarray::IxDyn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_tensor(rng: &mut ChaCha8Rng, shape: &[usize]) -> Tensor {
    let n: usize = shape.iter().product();
    let data: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    Tensor::from_shape_vec(IxDyn(shape), data).unwrap()
}

fn eval<F>(f: &F, inputs: &[Tensor]) -> f64
where
    F: for<'t> Fn(&'t Tape, &[Var<'t>]) -> Var<'t>,
{
    let tape = Tape::new();
    let vars: Vec<Var<'_>> = inputs.iter().map(|t| tape.leaf(t.clone())).collect();
    f(&tape, &vars).scalar()
}

/// Central-difference check of every input gradient of a scalar function.
fn check_grads<F>(inputs: &[Tensor], f: F, tol: f64)
where
    F: for<'t> Fn(&'t Tape, &[Var<'t>]) -> Var<'t>,
{
    let tape = Tape::new();
    let vars: Vec<Var<'_>> = inputs.iter().map(|t| tape.leaf(t.clone())).collect();
    let loss = f(&tape, &vars);
    let grads = backward(loss);
    let h = 1e-5;
    for (i, input) in inputs.iter().enumerate() {
        let analytic = grads
            .get(vars[i])
            .cloned()
            .unwrap_or_else(|| Tensor::zeros(input.raw_dim()));
        for j in 0..input.len() {
            let mut plus = inputs.to_vec();
            plus[i].as_slice_mut().unwrap()[j] += h;
            let mut minus = inputs.to_vec();
            minus[i].as_slice_mut().unwrap()[j] -= h;
            let numeric = (eval(&f, &plus) - eval(&f, &minus)) / (2.0 * h);
            let a = analytic.as_slice().unwrap()[j];
            let denom = a.abs().max(numeric.abs()).max(1e-6);
            assert!(
                (a - numeric).abs() / denom < tol,
                "input {i} elem {j}: analytic {a} vs numeric {numeric}"
            );
        }
    }
}

const TOL: f64 = 2e-6;

#[test]
fn grad_elementwise_ops() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = rand_tensor(&mut rng, &[3, 4]);
    let b = rand_tensor(&mut rng, &[3, 4]);
    check_grads(&[a.clone(), b.clone()], |_, v| v[0].add(v[1]).sum_all(), TOL);
    check_grads(&[a.clone(), b.clone()], |_, v| v[0].sub(v[1]).sum_all(), TOL);
    check_grads(
        &[a.clone(), b.clone()],
        |_, v| v[0].mul(v[1]).gelu().sum_all(),
        TOL,
    );
    check_grads(&[a.clone()], |_, v| v[0].neg().scale(0.7).sum_all(), TOL);
}

#[test]
fn grad_add_suffix_broadcast() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = rand_tensor(&mut rng, &[2, 3, 4]);
    let bias = rand_tensor(&mut rng, &[4]);
    let pos = rand_tensor(&mut rng, &[3, 4]);
    check_grads(
        &[a.clone(), bias],
        |_, v| v[0].add_suffix(v[1]).gelu().sum_all(),
        TOL,
    );
    check_grads(&[a, pos], |_, v| v[0].add_suffix(v[1]).gelu().sum_all(), TOL);
}

#[test]
fn grad_matmul_and_bmm() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = rand_tensor(&mut rng, &[2, 3, 4]);
    let w = rand_tensor(&mut rng, &[4, 5]);
    check_grads(
        &[a.clone(), w],
        |_, v| v[0].matmul(v[1]).gelu().sum_all(),
        TOL,
    );
    let x = rand_tensor(&mut rng, &[3, 2, 4]);
    let y = rand_tensor(&mut rng, &[3, 4, 2]);
    check_grads(&[x, y], |_, v| v[0].bmm(v[1]).gelu().sum_all(), TOL);
}

#[test]
fn matmul_matches_hand_result() {
    let tape = Tape::new();
    let a = tape.leaf(Tensor::from_shape_vec(IxDyn(&[2, 3]), vec![0., 1., 2., 3., 4., 5.]).unwrap());
    let w = tape.leaf(Tensor::from_shape_vec(IxDyn(&[3, 1]), vec![0., 1., 2.]).unwrap());
    let y = a.matmul(w);
    assert_eq!(y.value().as_slice().unwrap(), &[5.0, 14.0]);
}

#[test]
fn grad_shape_ops() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = rand_tensor(&mut rng, &[2, 3, 4]);
    check_grads(
        &[a.clone()],
        |_, v| v[0].permute(&[2, 0, 1]).gelu().sum_all(),
        TOL,
    );
    check_grads(&[a.clone()], |_, v| v[0].reshape(&[6, 4]).gelu().sum_all(), TOL);
    check_grads(
        &[a.clone()],
        |_, v| v[0].slice_ax(1, 1, 3).gelu().sum_all(),
        TOL,
    );
    check_grads(&[a.clone()], |_, v| v[0].index_ax(2, 1).gelu().sum_all(), TOL);
    check_grads(&[a.clone()], |_, v| v[0].t2().gelu().sum_all(), TOL);
    let b = rand_tensor(&mut rng, &[2, 3, 4]);
    check_grads(
        &[a.clone(), b.clone()],
        |_, v| concat(1, &[v[0], v[1]]).gelu().sum_all(),
        TOL,
    );
    check_grads(&[a, b], |_, v| stack(0, &[v[0], v[1]]).gelu().sum_all(), TOL);
}

#[test]
fn grad_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = rand_tensor(&mut rng, &[3, 4, 2]);
    check_grads(&[a.clone()], |_, v| v[0].sum_ax(1).gelu().sum_all(), TOL);
    check_grads(&[a.clone()], |_, v| v[0].mean_ax(0).gelu().sum_all(), TOL);
    check_grads(&[a.clone()], |_, v| v[0].mean_all(), TOL);
}

#[test]
fn grad_softmax_and_friends() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = rand_tensor(&mut rng, &[4, 5]);
    check_grads(
        &[a.clone()],
        |_, v| v[0].softmax_last().mul(v[0]).sum_all(),
        TOL,
    );
    // Positive inputs for log / row_normalize.
    let p = a.mapv(|x| x.abs() + 0.5);
    check_grads(&[p.clone()], |_, v| v[0].log().sum_all(), TOL);
    check_grads(
        &[p.clone()],
        |_, v| v[0].row_normalize_last().mul(v[0]).sum_all(),
        TOL,
    );
    // Stay away from the clamp kink.
    check_grads(&[p], |_, v| v[0].clamp_min(0.1).log().sum_all(), TOL);
}

#[test]
fn grad_layer_norm_and_normalize() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = rand_tensor(&mut rng, &[3, 6]);
    let gain = rand_tensor(&mut rng, &[6]);
    let bias = rand_tensor(&mut rng, &[6]);
    check_grads(
        &[x.clone(), gain, bias],
        |_, v| v[0].layer_norm(v[1], v[2], 1e-5).gelu().sum_all(),
        TOL,
    );
    check_grads(
        &[x.clone()],
        |_, v| v[0].unit_normalize_last().mul(v[0]).sum_all(),
        TOL,
    );
}

#[test]
fn grad_gather_and_max() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = rand_tensor(&mut rng, &[4, 5]);
    check_grads(
        &[x.clone()],
        |_, v| v[0].gather_rows(&[1, 0, 4, 2]).sum_all(),
        TOL,
    );
    check_grads(&[x], |_, v| v[0].max_last().gelu().sum_all(), TOL);
}

#[test]
fn softmax_rows_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tape = Tape::new();
    let x = tape.leaf(rand_tensor(&mut rng, &[7, 3]).mapv(|v| v * 10.0));
    let y = x.softmax_last();
    let v = y.value();
    for row in v.rows() {
        assert!((row.sum() - 1.0).abs() < 1e-12);
        assert!(row.iter().all(|&p| p > 0.0));
    }
}

#[test]
fn layer_norm_hand_case() {
    let tape = Tape::new();
    let x = tape.leaf(Tensor::from_shape_vec(IxDyn(&[1, 3]), vec![1.0, 2.0, 3.0]).unwrap());
    let gain = tape.constant(Tensor::ones(IxDyn(&[3])));
    let bias = tape.constant(Tensor::zeros(IxDyn(&[3])));
    let y = x.layer_norm(gain, bias, 1e-5);
    let inv = 1.0 / (2.0f64 / 3.0 + 1e-5).sqrt();
    let expect = [-inv, 0.0, inv];
    for (got, want) in y.value().iter().zip(expect) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn layer_norm_shift_invariance_and_constant_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let x = rand_tensor(&mut rng, &[4, 8]);
    let shifted = x.mapv(|v| v + 3.75);
    let run = |input: &Tensor| {
        let tape = Tape::new();
        let gain = tape.constant(Tensor::ones(IxDyn(&[8])));
        let bias = tape.constant(Tensor::zeros(IxDyn(&[8])));
        tape.leaf(input.clone()).layer_norm(gain, bias, 1e-5).value().as_ref().clone()
    };
    let a = run(&x);
    let b = run(&shifted);
    for (p, q) in a.iter().zip(b.iter()) {
        assert!((p - q).abs() < 1e-10);
    }
    // Constant row normalizes to zero through the epsilon guard.
    let c = run(&Tensor::from_elem(IxDyn(&[1, 8]), 5.0));
    assert!(c.iter().all(|&v| v.abs() < 1e-12));
}

#[test]
fn constants_and_disconnected_leaves_get_no_gradient() {
    let tape = Tape::new();
    let a = tape.leaf(Tensor::ones(IxDyn(&[2, 2])));
    let c = tape.constant(Tensor::ones(IxDyn(&[2, 2])));
    let unused = tape.leaf(Tensor::ones(IxDyn(&[2])));
    let loss = a.mul(c).sum_all();
    let grads = backward(loss);
    assert!(grads.get(a).is_some());
    assert!(grads.get(c).is_none());
    assert!(grads.get(unused).is_none());
}

#[test]
fn unit_normalize_zero_row_stays_zero() {
    let tape = Tape::new();
    let x = tape.leaf(Tensor::zeros(IxDyn(&[2, 3])));
    let y = x.unit_normalize_last();
    assert!(y.value().iter().all(|&v| v == 0.0));
    let grads = backward(y.sum_all());
    assert!(grads.get(x).unwrap().iter().all(|&v| v == 0.0));
}
