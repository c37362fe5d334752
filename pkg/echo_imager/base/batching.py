import collections.abc
from math import ceil


class InvalidBatch(Exception):
    pass


class BatchNotAnInteger(InvalidBatch):
    pass


class EmptyBatch(InvalidBatch):
    pass


class Batcher:
    """Split replication indices ``0..count-1`` into contiguous pages.

    Pages are handed to worker threads; results are merged by page number so
    the merged output does not depend on how many workers ran.
    """

    def __init__(self, count, per_batch):
        self.count = int(count)
        self.per_batch = max(1, int(per_batch))

    def __iter__(self):
        for number in self.batch_range:
            yield self.batch(number)

    def __len__(self):
        return self.num_batches

    @classmethod
    def for_workers(cls, count, workers):
        workers = max(1, int(workers))
        return cls(count, ceil(count / workers) if count else 1)

    def validate_number(self, number):
        """Validate the given 1-based batch number."""
        try:
            if isinstance(number, float) and not number.is_integer():
                raise ValueError
            number = int(number)
        except (TypeError, ValueError):
            raise BatchNotAnInteger('That batch number is not an integer')
        if number < 1:
            raise EmptyBatch('That batch number is less than 1')
        if number > self.num_batches:
            raise EmptyBatch('That batch contains no replications')
        return number

    def batch(self, number):
        number = self.validate_number(number)
        start = (number - 1) * self.per_batch
        stop = min(start + self.per_batch, self.count)
        return Batch(range(start, stop), number, self)

    @property
    def num_batches(self):
        if self.count == 0:
            return 0
        return ceil(self.count / self.per_batch)

    @property
    def batch_range(self):
        return range(1, self.num_batches + 1)


class Batch(collections.abc.Sequence):

    def __init__(self, indices, number, batcher):
        self.indices = indices
        self.number = number
        self.batcher = batcher

    def __repr__(self):
        return '<Batch %s of %s>' % (self.number, self.batcher.num_batches)

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, index):
        if not isinstance(index, (int, slice)):
            raise TypeError(
                'Batch indices must be integers or slices, not %s.'
                % type(index).__name__
            )
        return self.indices[index]
