mod common;

use common::tables::check_tables;

#[test]
fn order_two_equations_match_entries() {
    let (failures, unexercised) = check_tables(2, 28, 8);
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(unexercised.is_empty(), "never violated: {unexercised:?}");
}

#[test]
fn order_three_equations_match_entries() {
    let (failures, unexercised) = check_tables(3, 28, 8);
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(unexercised.is_empty(), "never violated: {unexercised:?}");
}
