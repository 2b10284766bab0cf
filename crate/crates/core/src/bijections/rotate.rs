use crate::marks::MarkedForest;

use super::{BijectionError, Letter};

/// Cyclic shift of forest positions: output position `i` holds input
/// position `(i + a) mod d`.
pub fn rotate(f: &MarkedForest, a: Letter) -> Result<MarkedForest, BijectionError> {
    let d = f.arity();
    a.check(d)?;
    Ok(shift(f, a.value() % d))
}

/// Recovers the letter from the forest alone: the unique shift `r` making
/// the leaf sequence an excursion is undone, and the letter is `d − r`
/// (`d` when `r = 0`), so that `rotate_inv(rotate(f, a)) == (f, a)`.
pub fn rotate_inv(f: &MarkedForest) -> Result<(MarkedForest, Letter), BijectionError> {
    let d = f.arity();
    let r = f.leaf_sequence()?.excursion_shift();
    let a = if r == 0 { d } else { d - r };
    Ok((shift(f, r), Letter::new(a, d)?))
}

fn shift(f: &MarkedForest, r: usize) -> MarkedForest {
    let mut trees = f.trees().to_vec();
    trees.rotate_left(r);
    MarkedForest::from_parts(trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijections::cut;
    use crate::bijections::cut::tests::five_ary_example;

    #[test]
    fn five_ary_rotation() {
        let (f, a) = cut(&five_ary_example(), Letter::new(2, 5).unwrap()).unwrap();
        let g = rotate(&f, a).unwrap();
        let expected: Vec<_> = [2, 3, 4, 0, 1].iter().map(|&i| f.trees()[i].clone()).collect();
        assert_eq!(g.trees(), &expected[..]);
        assert_eq!(
            g.leaf_sequence().unwrap(),
            f.leaf_sequence().unwrap().rot(2).unwrap()
        );
        let (back, b) = rotate_inv(&g).unwrap();
        assert_eq!(g.leaf_sequence().unwrap().excursion_shift(), 3);
        assert_eq!(b.value(), 2);
        assert_eq!(back, f);
    }

    #[test]
    fn letter_d_is_identity() {
        let (f, _) = cut(&five_ary_example(), Letter::new(1, 5).unwrap()).unwrap();
        assert_eq!(rotate(&f, Letter::new(5, 5).unwrap()).unwrap(), f);
        let (same, a) = rotate_inv(&f).unwrap();
        assert_eq!((same, a.value()), (f, 5));
    }

    #[test]
    fn all_letters_round_trip() {
        let (f, _) = cut(&five_ary_example(), Letter::new(1, 5).unwrap()).unwrap();
        for a in 1..=5 {
            let a = Letter::new(a, 5).unwrap();
            assert_eq!(rotate_inv(&rotate(&f, a).unwrap()).unwrap(), (f.clone(), a));
        }
    }
}
