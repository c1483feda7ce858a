//! Replaying message streams through a [`Book`].

use thiserror::Error;

use super::message::{MessageType, RawMessage};
use crate::book::{Book, BookError, BookEvent, QuoteSnapshot};
use crate::types::Price;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("message {index} ({msg_type:?} order {order_id}): {source}")]
pub struct ReplayError {
    pub index: usize,
    pub msg_type: MessageType,
    pub order_id: u64,
    #[source]
    pub source: BookError,
}

/// One applied message with the quotes that bracket it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub message: RawMessage,
    pub before: QuoteSnapshot,
    pub after: QuoteSnapshot,
    /// The volume-changing event, absent for hidden executions and halts.
    pub event: Option<BookEvent>,
}

impl Step {
    pub fn quotes_changed(&self) -> bool {
        !self.before.same_prices(&self.after)
    }
}

/// Applies messages one at a time, tracking quotes.
#[derive(Debug, Clone)]
pub struct Replayer {
    book: Book,
    quotes: QuoteSnapshot,
    index: usize,
    scratch: Vec<BookEvent>,
}

impl Replayer {
    pub fn new(book: Book) -> Self {
        let quotes = book.quotes();
        Replayer {
            book,
            quotes,
            index: 0,
            scratch: Vec::with_capacity(4),
        }
    }

    pub fn book(&self) -> &Book {
        &self.book
    }

    pub fn into_book(self) -> Book {
        self.book
    }

    pub fn quotes(&self) -> QuoteSnapshot {
        self.quotes
    }

    /// Number of messages applied so far.
    pub fn applied(&self) -> usize {
        self.index
    }

    /// Applies a single message.
    ///
    /// Execution rows consume the referenced resting order; hidden executions
    /// and halts leave the book untouched.
    pub fn apply(&mut self, msg: &RawMessage) -> Result<Step, ReplayError> {
        let index = self.index;
        let fail = |source| ReplayError {
            index,
            msg_type: msg.msg_type,
            order_id: msg.order_id,
            source,
        };
        self.scratch.clear();
        let before = self.quotes;
        let result = match msg.msg_type {
            MessageType::NewLimit => self.book.add_resting_into(
                msg.order_id,
                msg.direction,
                Price(msg.price),
                msg.shares,
                msg.time,
                &mut self.scratch,
            ),
            MessageType::PartialCancel => {
                self.book
                    .cancel_into(msg.order_id, Some(msg.shares), msg.time, &mut self.scratch)
            }
            MessageType::Delete => self.book.cancel_into(msg.order_id, None, msg.time, &mut self.scratch),
            MessageType::ExecuteVisible => {
                self.book
                    .execute_into(msg.order_id, msg.shares, msg.time, &mut self.scratch)
            }
            MessageType::ExecuteHidden | MessageType::Halt => Ok(()),
        };
        result.map_err(fail)?;
        self.index += 1;
        let event = self.scratch.first().copied();
        if event.is_some() {
            self.quotes = self.book.quotes();
        }
        Ok(Step {
            index,
            message: *msg,
            before,
            after: self.quotes,
            event,
        })
    }
}

/// Iterator adapter replaying a message stream.
pub struct Replay<I> {
    messages: I,
    replayer: Replayer,
}

impl<I> Replay<I> {
    pub fn replayer(&self) -> &Replayer {
        &self.replayer
    }

    pub fn into_book(self) -> Book {
        self.replayer.into_book()
    }
}

impl<I: Iterator<Item = RawMessage>> Iterator for Replay<I> {
    type Item = Result<Step, ReplayError>;

    fn next(&mut self) -> Option<Self::Item> {
        let msg = self.messages.next()?;
        Some(self.replayer.apply(&msg))
    }
}

pub fn replay<I: IntoIterator<Item = RawMessage>>(messages: I, book: Book) -> Replay<I::IntoIter> {
    Replay {
        messages: messages.into_iter(),
        replayer: Replayer::new(book),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Side, Timestamp};

    fn msg(t: u64, kind: MessageType, id: u64, shares: u64, price: i64, side: Side) -> RawMessage {
        RawMessage {
            time: Timestamp(t),
            msg_type: kind,
            order_id: id,
            shares,
            price,
            direction: side,
        }
    }

    #[test]
    fn add_then_delete_leaves_empty_book() {
        let msgs = vec![
            msg(1, MessageType::NewLimit, 7, 100, 10_000, Side::Buy),
            msg(2, MessageType::Delete, 7, 100, 10_000, Side::Buy),
        ];
        let mut r = replay(msgs, Book::new(100));
        let steps: Vec<_> = r.by_ref().collect::<Result<_, _>>().unwrap();
        assert_eq!(steps.len(), 2);
        assert!(r.into_book().is_empty());
        assert_eq!(steps[1].after, QuoteSnapshot::default());
    }

    #[test]
    fn visible_execution_reduces_ask_volume_without_moving_quotes() {
        let msgs = vec![
            msg(1, MessageType::NewLimit, 1, 100, 10_100, Side::Sell),
            msg(2, MessageType::NewLimit, 2, 100, 10_000, Side::Buy),
            msg(3, MessageType::ExecuteVisible, 1, 40, 10_100, Side::Sell),
        ];
        let steps: Vec<_> = replay(msgs, Book::new(100)).collect::<Result<_, _>>().unwrap();
        let s = &steps[2];
        assert_eq!(s.before.ask_volume, 100);
        assert_eq!(s.after.ask_volume, 60);
        assert!(!s.quotes_changed());
        assert_eq!(s.event.unwrap().delta, -40);
    }

    #[test]
    fn hidden_execution_and_halt_do_not_mutate() {
        let msgs = vec![
            msg(1, MessageType::NewLimit, 1, 100, 10_100, Side::Sell),
            msg(2, MessageType::ExecuteHidden, 0, 50, 10_100, Side::Sell),
            msg(3, MessageType::Halt, 0, 0, -1, Side::Sell),
        ];
        let steps: Vec<_> = replay(msgs, Book::new(100)).collect::<Result<_, _>>().unwrap();
        assert!(steps[1].event.is_none() && steps[2].event.is_none());
        assert_eq!(steps[2].after.ask_volume, 100);
    }

    #[test]
    fn reports_stream_corruption() {
        let msgs = vec![
            msg(1, MessageType::NewLimit, 1, 100, 10_100, Side::Sell),
            msg(2, MessageType::ExecuteVisible, 1, 140, 10_100, Side::Sell),
        ];
        let err = replay(msgs, Book::new(100)).collect::<Result<Vec<_>, _>>().unwrap_err();
        assert_eq!(err.index, 1);
        assert!(matches!(err.source, BookError::Oversized { .. }));

        let err = replay(vec![msg(1, MessageType::Delete, 9, 1, 100, Side::Buy)], Book::new(100))
            .next()
            .unwrap()
            .unwrap_err();
        assert_eq!(err.source, BookError::UnknownOrder(9));
    }
}
