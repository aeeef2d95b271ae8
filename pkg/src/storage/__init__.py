"""本地报告存储：--report 文件与 reports/ 目录下的 JSON Lines 报告"""
