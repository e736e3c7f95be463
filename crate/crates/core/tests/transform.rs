use polarkit::gf2::{apply_fn, bit_reverse_permute, encode, generator_row, reverse_index, row_weight};
use polarkit::BitVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `F^{⊗n}` built by repeated Kronecker products.
fn kron_power(n: u32) -> Vec<Vec<u8>> {
    let f = [[1u8, 0], [1, 1]];
    let mut m = vec![vec![1u8]];
    for _ in 0..n {
        let size = m.len();
        let mut next = vec![vec![0u8; 2 * size]; 2 * size];
        for (a, frow) in f.iter().enumerate() {
            for (b, &fab) in frow.iter().enumerate() {
                for r in 0..size {
                    for c in 0..size {
                        next[a * size + r][b * size + c] = fab & m[r][c];
                    }
                }
            }
        }
        m = next;
    }
    m
}

fn row_times(u: &[u8], m: &[Vec<u8>]) -> Vec<u8> {
    let len = m.len();
    (0..len)
        .map(|c| (0..len).fold(0, |acc, r| acc ^ (u[r] & m[r][c])))
        .collect()
}

fn generator(n: u32) -> Vec<Vec<u8>> {
    let f = kron_power(n);
    (0..f.len()).map(|r| f[reverse_index(r, n)].clone()).collect()
}

#[test]
fn apply_fn_matches_kronecker_exhaustively_up_to_8() {
    for n in 0..=3u32 {
        let m = kron_power(n);
        let len = 1usize << n;
        for word in 0..1u32 << len {
            let u: Vec<u8> = (0..len).map(|j| ((word >> j) & 1) as u8).collect();
            assert_eq!(apply_fn(&BitVector::from_bits(&u)).unwrap().to_bits(), row_times(&u, &m));
        }
    }
}

#[test]
fn encode_matches_generator_sampled_up_to_256() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 4..=8u32 {
        let g = generator(n);
        let m = kron_power(n);
        let len = 1usize << n;
        for _ in 0..200 {
            let u: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
            let v = BitVector::from_bits(&u);
            assert_eq!(encode(&v).unwrap().to_bits(), row_times(&u, &g));
            assert_eq!(apply_fn(&v).unwrap().to_bits(), row_times(&u, &m));
        }
    }
}

#[test]
fn generator_rows_and_weights() {
    let g = generator(2);
    let rows: Vec<String> = (0..4).map(|i| generator_row(4, i).unwrap().to_string()).collect();
    assert_eq!(rows, ["1000", "1010", "1100", "1111"]);
    for (i, r) in g.iter().enumerate() {
        assert_eq!(generator_row(4, i).unwrap().to_bits(), *r);
    }
    // row weights of G_N form the multiset {2^w : w = popcount}, C(n, w) times each
    for n in 0..=10u32 {
        let len = 1usize << n;
        let mut counts = vec![0usize; n as usize + 1];
        for i in 0..len {
            let w = generator_row(len, i).unwrap().count_ones();
            assert_eq!(w, row_weight(i));
            counts[w.trailing_zeros() as usize] += 1;
        }
        let mut binom = 1usize;
        for (k, &c) in counts.iter().enumerate() {
            assert_eq!(c, binom, "n={n} w={k}");
            binom = binom * (n as usize - k) / (k + 1);
        }
    }
}

#[test]
fn worked_example() {
    let u: BitVector = "1101".parse().unwrap();
    assert_eq!(encode(&u).unwrap().to_string(), "1101");
}

fn bits(max_n: u32) -> impl Strategy<Value = BitVector> {
    (0..=max_n).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), 1usize << n))
        .prop_map(BitVector::from_bools)
}

fn pair(max_n: u32) -> impl Strategy<Value = (BitVector, BitVector)> {
    (0..=max_n).prop_flat_map(|n| {
        let len = 1usize << n;
        (
            proptest::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bools),
            proptest::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bools),
        )
    })
}

proptest! {
    #[test]
    fn encode_is_linear((a, b) in pair(11)) {
        let sum = encode(&(&a ^ &b)).unwrap();
        prop_assert_eq!(sum, &encode(&a).unwrap() ^ &encode(&b).unwrap());
    }

    #[test]
    fn encode_is_an_involution(u in bits(12)) {
        prop_assert_eq!(encode(&encode(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn bit_reversal_commutes_with_fn(u in bits(12)) {
        let a = apply_fn(&bit_reverse_permute(&u).unwrap()).unwrap();
        let b = bit_reverse_permute(&apply_fn(&u).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(bit_reverse_permute(&bit_reverse_permute(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn display_round_trip(u in bits(9)) {
        let parsed: BitVector = u.to_string().parse().unwrap();
        prop_assert_eq!(parsed, u);
    }
}
