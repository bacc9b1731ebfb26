; y moves up non-deterministically but never passes x
(declare-var x Int)(declare-var y Int)
(init (and (= x 0) (= y 0)))
(trans (and (= x' (+ x 1)) (>= y' y) (<= y' x')))
(good (<= y x))
