; two counters incremented in lockstep stay equal
(declare-var x Int)(declare-var y Int)
(init (and (= x 0) (= y 0)))
(trans (and (= x' (+ x 1)) (= y' (+ y 1))))
(good (= x y))
