//! Fixtures shared by the criterion benches.

use lcstruct::CMonomialIdeal;

/// `(2X, Y)` in `Z[X, Y]`.
pub fn two_x_y() -> CMonomialIdeal {
    CMonomialIdeal::new(2, vec![(2, vec![1, 0]), (1, vec![0, 1])]).expect("valid ideal")
}

/// Four generators in three variables with mixed coefficients.
pub fn mixed_four() -> CMonomialIdeal {
    CMonomialIdeal::new(
        3,
        vec![
            (12, vec![1, 1, 0]),
            (2, vec![0, 2, 1]),
            (3, vec![1, 0, 1]),
            (1, vec![0, 0, 2]),
        ],
    )
    .expect("valid ideal")
}
