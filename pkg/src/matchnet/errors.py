"""Error taxonomy shared across the package.

Four user-facing classes plus one internal class:

- ParameterError: bad generator or construction parameters.
- StructureError: graph fails a structural requirement (connectivity,
  tree-ness, family mismatch, malformed serialized input).
- TaskError: a routing or verification task is malformed (not a
  permutation, sources/targets mismatch, oversized partial task).
- CapError: instance exceeds a solver cap; the operation is refused,
  not attempted.  CLI maps this to exit code 2.
- ConstructionError: an internal invariant of a builder failed.  This is
  a bug in the builder, never a user error, and is raised loudly.
"""


class ParameterError(ValueError):
    pass


class StructureError(ValueError):
    pass


class TaskError(ValueError):
    pass


class CapError(RuntimeError):
    pass


class ConstructionError(RuntimeError):
    pass
