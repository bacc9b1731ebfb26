; a counter that only grows
(declare-var x Int)
(init (= x 0))
(trans (= x' (+ x 1)))
(good (>= x 0))
