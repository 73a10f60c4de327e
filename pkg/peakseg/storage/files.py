# -*- coding: utf-8 -*-
import logging
import os
import tempfile

log = logging.getLogger(__name__)


def write_atomic(path, payload):
    """Write ``payload`` (bytes or str) to ``path`` via a temporary file.

    The temporary file lives in the destination directory and is renamed
    over ``path`` once complete, so readers never observe a partial file.
    """
    if isinstance(payload, str):
        payload = payload.encode('utf-8')
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.tmp-',
                               suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, 'wb') as fp:
            fp.write(payload)
            fp.flush()
            os.fsync(fp.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    log.debug('wrote %s (%d bytes)', path, len(payload))


def read_bytes(path):
    with open(path, 'rb') as fp:
        return fp.read()
