; y outruns x + 3 after a few steps
(declare-var x Int)(declare-var y Int)
(init (and (= x 0) (= y 0)))
(trans (and (= x' (+ x 1)) (= y' (+ y 2))))
(good (<= y (+ x 3)))
