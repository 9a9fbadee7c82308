"""Writing records out."""

import json


def _buffered(cls):
    cls.buffered = True
    return cls


@_buffered
class JsonSink:
    def __init__(self, stream,
                 indent=None,
                 sort_keys=False):
        self.stream = stream
        self.indent = indent
        self.sort_keys = sort_keys
        self.buffer = []

    def write(self, record):
        self.buffer.append(record)

    def flush(self):
        for record in self.buffer:
            self.stream.write(json.dumps(record, indent=self.indent) + "\n")
        self.buffer.clear()

    async def flush_async(self):
        self.flush()


class NullSink:
    def write(self, record):
        pass

    def flush(self):
        pass
