import contextlib


def deco(arg):
    def wrap(fn):
        return fn
    return wrap


@deco(
    "multi-line decorator"
)
class Service:
    @property
    def name(self):
        return "svc"

    @name.setter
    def name(self, value):
        self._name = value

    @contextlib.contextmanager
    def session(self):
        yield self


@deco("x")
def handler(event: dict[str, "Service"],
            context=None,
            ) -> None:
    """Handle.

    With a multi-line docstring.
    """
    x = [i for i in range(3)
         if i]
    return None
