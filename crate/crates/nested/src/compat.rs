use cylinder::Label;

/// True iff the label never holds both entries of one pivot.
pub fn consistent(label: &Label) -> bool {
    label.iter().all(|e| !label.contains(&e.conjugate()))
}

/// Two labels are compatible when their union is consistent.
pub fn compatible(a: &Label, b: &Label) -> bool {
    consistent(a) && consistent(b) && a.iter().all(|e| !b.contains(&e.conjugate()))
}
