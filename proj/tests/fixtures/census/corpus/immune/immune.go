package immune

// unsafe.Pointer appears here only inside a comment.
/* reflect.SliceHeader and uintptr, also in a comment */

func Describe() string {
	return "unsafe.Pointer" + `uintptr reflect.StringHeader`
}
