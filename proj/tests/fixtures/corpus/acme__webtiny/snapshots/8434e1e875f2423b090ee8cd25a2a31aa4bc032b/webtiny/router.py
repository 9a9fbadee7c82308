"""URL routing."""

from webtiny.request import Request


class Route:
    def __init__(self, pattern, handler):
        self.pattern = pattern
        self.handler = handler
        self.parts = pattern.strip("/").split("/")

    def match(self, path):
        parts = [p for p in path.strip("/").split("/") if p]
        if len(parts) != len(self.parts):
            return None
        params = {}
        for want, got in zip(self.parts, parts):
            if want.startswith("<") and want.endswith(">"):
                params[want[1:-1]] = got
            elif want != got:
                return None
        return params


class Router:
    def __init__(self):
        self.routes = []

    def add(self, pattern, handler):
        self.routes.append(Route(pattern, handler))

    def dispatch(self, raw_path):
        request = Request(raw_path)
        for route in self.routes:
            params = route.match(request.path)
            if params is not None:
                return route.handler(request, **params)
        raise LookupError(raw_path)
