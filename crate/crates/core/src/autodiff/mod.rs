//! Tape-based reverse-mode automatic differentiation over f64 tensors.
//!
//! One [`Tape`] records the operations of a single forward pass; [`backward`]
//! then accumulates gradients of a scalar loss with respect to every recorded
//! node. Frozen tensors enter the tape as constants, so no gradient work is
//! ever done for them or for subgraphs that only depend on constants.

use ndarray::IxDyn;
use std::cell::RefCell;
use std::rc::Rc;

mod ops;

pub use ops::{concat, stack};

/// Dynamic-rank double-precision tensor.
pub type Tensor = ndarray::ArrayD<f64>;

type BackwardFn = Box<dyn Fn(&Tensor) -> Vec<Option<Tensor>>>;

struct Node {
    value: Rc<Tensor>,
    needs_grad: bool,
    parents: Vec<usize>,
    backward: Option<BackwardFn>,
}

/// Operation record of one forward pass.
#[derive(Default)]
pub struct Tape {
    nodes: RefCell<Vec<Node>>,
}

/// Handle to a tensor stored on a tape.
#[derive(Clone, Copy)]
pub struct Var<'t> {
    tape: &'t Tape,
    index: usize,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn push(
        &self,
        value: Tensor,
        needs_grad: bool,
        parents: Vec<usize>,
        backward: Option<BackwardFn>,
    ) -> usize {
        // All stored values are standard layout so reshape views are free.
        let value = if value.is_standard_layout() {
            value
        } else {
            value.as_standard_layout().into_owned()
        };
        let mut nodes = self.nodes.borrow_mut();
        let index = nodes.len();
        debug_assert!(parents.iter().all(|&p| p < index));
        nodes.push(Node {
            value: Rc::new(value),
            needs_grad,
            parents,
            backward,
        });
        index
    }

    /// Insert a tensor whose gradient will be tracked.
    pub fn leaf(&self, value: Tensor) -> Var<'_> {
        Var {
            tape: self,
            index: self.push(value, true, Vec::new(), None),
        }
    }

    /// Insert a tensor treated as a constant.
    pub fn constant(&self, value: Tensor) -> Var<'_> {
        Var {
            tape: self,
            index: self.push(value, false, Vec::new(), None),
        }
    }

    /// Insert a tensor as leaf or constant depending on `needs_grad`.
    pub fn var(&self, value: Tensor, needs_grad: bool) -> Var<'_> {
        if needs_grad {
            self.leaf(value)
        } else {
            self.constant(value)
        }
    }

    fn value(&self, index: usize) -> Rc<Tensor> {
        Rc::clone(&self.nodes.borrow()[index].value)
    }

    fn needs_grad(&self, index: usize) -> bool {
        self.nodes.borrow()[index].needs_grad
    }
}

impl<'t> Var<'t> {
    pub fn value(&self) -> Rc<Tensor> {
        self.tape.value(self.index)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.value().shape().to_vec()
    }

    pub fn needs_grad(&self) -> bool {
        self.tape.needs_grad(self.index)
    }

    pub fn tape(&self) -> &'t Tape {
        self.tape
    }

    /// Scalar value of a single-element tensor.
    pub fn scalar(&self) -> f64 {
        let v = self.value();
        assert_eq!(v.len(), 1, "scalar() on non-scalar tensor");
        v.iter().next().copied().unwrap()
    }
}

/// Gradients of one scalar with respect to every connected tape node.
pub struct Gradients {
    grads: Vec<Option<Tensor>>,
}

impl Gradients {
    /// Gradient for `v`; `None` when no differentiable path reached it.
    pub fn get(&self, v: Var<'_>) -> Option<&Tensor> {
        self.grads.get(v.index).and_then(|g| g.as_ref())
    }
}

/// Reverse accumulation from a scalar loss node.
pub fn backward(loss: Var<'_>) -> Gradients {
    let nodes = loss.tape.nodes.borrow();
    let mut grads: Vec<Option<Tensor>> = (0..nodes.len()).map(|_| None).collect();
    let seed_shape = nodes[loss.index].value.shape().to_vec();
    assert_eq!(
        seed_shape.iter().product::<usize>(),
        1,
        "backward requires a scalar loss"
    );
    grads[loss.index] = Some(Tensor::ones(IxDyn(&seed_shape)));
    for i in (0..=loss.index).rev() {
        if grads[i].is_none() {
            continue;
        }
        let node = &nodes[i];
        let Some(back) = node.backward.as_ref() else {
            continue;
        };
        // Parents always precede their children on the tape.
        let (before, at) = grads.split_at_mut(i);
        let g = at[0].as_ref().expect("gradient present");
        for (&p, pg) in node.parents.iter().zip(back(g)) {
            if let Some(pg) = pg {
                // Keep gradients standard layout so backward closures can
                // reshape views of them.
                let pg = if pg.is_standard_layout() {
                    pg
                } else {
                    pg.as_standard_layout().into_owned()
                };
                match &mut before[p] {
                    Some(acc) => *acc += &pg,
                    slot => *slot = Some(pg),
                }
            }
        }
    }
    Gradients { grads }
}

#[cfg(test)]
mod tests;
