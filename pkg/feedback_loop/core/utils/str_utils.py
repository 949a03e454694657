from typing import List, Optional, Sequence, overload


@overload
def process_and_verify_string(input_str: str, allowed_values: Sequence[str]) -> List[str]:
    ...


@overload
def process_and_verify_string(input_str: None, allowed_values: Sequence[str]) -> None:
    ...


def process_and_verify_string(input_str: Optional[str], allowed_values: Sequence[str]) -> Optional[List[str]]:
    """Process a comma-separated string by lower-casing it, removing whitespaces and splitting it.
    Then verify that every element is one of `allowed_values`. Duplicates are dropped, first
    occurrence wins, so `"dp, sp,dp"` becomes `["dp", "sp"]`.

    Args:
        input_str: The input string to be processed.
        allowed_values: A sequence of allowed values.

    Returns:
        A list containing the processed and verified elements. If the input_str is None,
        then None is returned.

    Raises:
        ValueError: If an element is not allowed or the string holds no element at all.
    """
    if input_str is None:
        return None

    elements = [elem for elem in input_str.lower().replace(" ", "").split(",") if elem]
    if not elements:
        raise ValueError("Expected at least one comma-separated value, got an empty string.")

    allowed = set(allowed_values)
    for elem in elements:
        if elem not in allowed:
            raise ValueError(f"Element `{elem}` is not in the allowed values {sorted(allowed)}.")

    return list(dict.fromkeys(elements))
