use crate::linalg::{LinalgError, Matrix};
use crate::scalar::Scalar;

use super::IntensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    /// Member of the recurrence class with this index.
    Recurrent(usize),
    Transient,
}

/// Partition of the state space into recurrence classes and transient states.
///
/// Classes are sorted by their smallest member, members ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStructure {
    communicating: Vec<Vec<usize>>,
    classes: Vec<Vec<usize>>,
    transient: Vec<usize>,
    class_of: Vec<StateClass>,
}

impl ClassStructure {
    /// The recurrence classes `J₁, …, J_k`.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> Option<&[usize]> {
        self.classes.get(id).map(Vec::as_slice)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Transient states `T`, ascending.
    pub fn transient(&self) -> &[usize] {
        &self.transient
    }

    /// Recurrent states `R = Z \ T`, ascending.
    pub fn recurrent(&self) -> Vec<usize> {
        (0..self.class_of.len())
            .filter(|&i| self.class_of[i] != StateClass::Transient)
            .collect()
    }

    pub fn class_of(&self, state: usize) -> StateClass {
        self.class_of[state]
    }

    /// All communicating classes, closed or not.
    pub fn communicating_classes(&self) -> &[Vec<usize>] {
        &self.communicating
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_irreducible(&self) -> bool {
        self.classes.len() == 1 && self.transient.is_empty()
    }
}

/// Transitive closure of the strict reachability relation: entry `(i, j)` is
/// `true` iff a path of length ≥ 1 leads from `i` to `j`.
pub fn reachability_closure(adjacency: &Matrix<bool>) -> Result<Matrix<bool>, LinalgError> {
    if !adjacency.is_square() {
        return Err(LinalgError::Shape {
            op: "reachability_closure",
            left: adjacency.shape(),
            right: adjacency.shape(),
        });
    }
    let n = adjacency.rows();
    let mut r = adjacency.clone();
    // Warshall
    for k in 0..n {
        for i in 0..n {
            if !r.get(i, k) {
                continue;
            }
            for j in 0..n {
                if r.get(k, j) {
                    r.set(i, j, true);
                }
            }
        }
    }
    Ok(r)
}

/// Classifies the states of a directed graph. Self-loops are ignored.
///
/// States communicate when each reaches the other; a communicating class is a
/// recurrence class iff no edge leaves it.
pub fn classify_graph(adjacency: &Matrix<bool>) -> Result<ClassStructure, LinalgError> {
    let n = adjacency.rows();
    let adj = Matrix::from_fn(adjacency.rows(), adjacency.cols(), |i, j| {
        i != j && adjacency.get(i, j)
    });
    let reach = reachability_closure(&adj)?;

    let mut comm_of = vec![usize::MAX; n];
    let mut communicating: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if comm_of[i] != usize::MAX {
            continue;
        }
        let id = communicating.len();
        let members: Vec<usize> = (i..n)
            .filter(|&j| j == i || (reach.get(i, j) && reach.get(j, i)))
            .collect();
        for &j in &members {
            comm_of[j] = id;
        }
        communicating.push(members);
    }

    let mut classes = Vec::new();
    let mut class_of = vec![StateClass::Transient; n];
    for members in &communicating {
        let id = comm_of[members[0]];
        let closed = members
            .iter()
            .all(|&i| (0..n).all(|j| !adj.get(i, j) || comm_of[j] == id));
        if closed {
            for &i in members {
                class_of[i] = StateClass::Recurrent(classes.len());
            }
            classes.push(members.clone());
        }
    }
    let transient = (0..n)
        .filter(|&i| class_of[i] == StateClass::Transient)
        .collect();

    Ok(ClassStructure {
        communicating,
        classes,
        transient,
        class_of,
    })
}

/// Recurrence classes and transient states of `B`, using the graph with an
/// edge `i → j` iff `b_ij > 0`.
pub fn classify_states<T: Scalar>(b: &IntensityMatrix<T>) -> ClassStructure {
    classify_graph(&b.adjacency()).expect("intensity matrix is square")
}
