"""Tiny helper: expose dataclass fields as command-line overrides."""

import argparse
from dataclasses import fields


def parse_config(cls, argv=None):
    p = argparse.ArgumentParser(description=cls.__doc__)
    for f in fields(cls):
        kind = type(f.default)
        if kind is bool:
            p.add_argument(f"--{f.name.replace('_', '-')}", action="store_true", default=f.default)
        else:
            p.add_argument(f"--{f.name.replace('_', '-')}", type=kind, default=f.default)
    return cls(**vars(p.parse_args(argv)))
