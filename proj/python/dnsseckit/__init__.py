"""DNSSEC zone signing, validation and cache-poisoning experiments."""

from ._core import (
    Error,
    Key,
    analytic_success_probability,
    answer,
    canonical_compare,
    demo_zone_text,
    ds_record,
    key_tag,
    make_query,
    parse_zone,
    render,
    run_attack,
    sign_zone,
)

__all__ = [
    "Error",
    "Key",
    "analytic_success_probability",
    "answer",
    "canonical_compare",
    "demo_zone_text",
    "ds_record",
    "key_tag",
    "make_query",
    "parse_zone",
    "render",
    "run_attack",
    "sign_zone",
]
