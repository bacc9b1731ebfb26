; x accumulates the non-negative counter y
(declare-var x Int)(declare-var y Int)
(init (and (= x 1) (= y 0)))
(trans (and (= x' (+ x y)) (= y' (+ y 1))))
(good (>= x 1))
