"""Executable ZH-calculus: exact semantics, scalable diagrams and derived identities."""

from .diagram import (CapacityError, ArityError, Diagram, End, Generator, Kind, compose,
                      compose_all, equal_semantics, semantics, tensor_product)

__all__ = ["CapacityError", "ArityError", "Diagram", "End", "Generator", "Kind", "compose",
           "compose_all", "equal_semantics", "semantics", "tensor_product"]
__version__ = "0.1.0"
