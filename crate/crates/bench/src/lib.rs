//! Inputs shared by the benchmarks in `benches/`.

/// An appendix-length paragraph (the u4 fixture).
pub const PARAGRAPH: &str = include_str!("../../../fixtures/corpus/paragraphs/u4.txt");

/// Gold trees of the fixture corpus.
pub const GOLD: &str = include_str!("../../../fixtures/corpus/gold.conllu");

/// A dependency reply for `forms`: every word attached to its right
/// neighbour, the last one root, followed by a stated average.
pub fn chain_reply(forms: &[String]) -> String {
    let n = forms.len();
    let mut out = String::from("Here is the parse:\n\n");
    for (i, f) in forms.iter().enumerate() {
        let (head, dist) = if i + 1 == n { (0, 0) } else { (i + 2, 1) };
        out.push_str(&format!("{}, {f}, {head}, {dist}\n", i + 1));
    }
    out.push_str(&format!("\nThe average dependency distance is {:.2}.\n", (n - 1) as f64 / n as f64));
    out
}

/// `forms` with every other pair of neighbours glued together.
pub fn merged(forms: &[String]) -> Vec<String> {
    forms.chunks(2).enumerate().flat_map(|(i, c)| if i % 2 == 0 { vec![c.concat()] } else { c.to_vec() }).collect()
}
