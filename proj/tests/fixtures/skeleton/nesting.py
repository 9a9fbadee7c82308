"""Nested declarations and odd layouts."""
import functools


class Outer:
    """def fake(): this is a docstring, not a function."""

    class Inner:
        def method(self):
            return 1

        class Deeper:
            pass

    def outer_method(self, a,
                     b=lambda x: x + 1,
                     c={"k": 1}) -> dict:
        def helper(y):
            def innermost():
                return y
            return innermost
        return {a: helper}

    if True:
        def conditional(self):
            return "in class body"

    @staticmethod
    @functools.lru_cache(
        maxsize=None,
    )
    def cached(x):
        return x


def top(a, *args, **kwargs): return a


class OneLiner: x = 1


async def fetch(session,
                url):
    async with session.get(url) as resp:
        return await resp.text()


for _name in ("a", "b"):
    def in_loop():
        pass


def trailing_comment():
    x = 1
    # comment at function indentation
# comment at column zero
    return x


def string_tail():
    return """
def not_real():
    pass
"""


def continued(a, \
              b):
    total = a + \
        b
    return total
